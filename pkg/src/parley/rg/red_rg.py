"""Always-run RG answering red questions from the response table.

A substring-matched red flag carries a key into the table for a
specific, detailed reply; word-list hits fall back to the category
default.
"""

from __future__ import annotations

from pathlib import Path

import yaml

from ..types import ConfigurationError, ResponseCandidate, SystemAction
from .base import ANY_TOPIC, ResponseGenerator, RGContext


def load_red_responses(path: str | Path) -> dict[str, str]:
    try:
        doc = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    except FileNotFoundError as exc:
        raise ConfigurationError(f"red response pack not found: {path}") from exc
    return {str(k): str(v) for k, v in doc.items()}


class RedQuestionRG(ResponseGenerator):
    rg_id = "red_question"
    always_run = True

    def __init__(self, responses: dict[str, str]) -> None:
        self.responses = responses
        self.actions = frozenset({SystemAction.RED_RESPONSE})
        self.topics = frozenset({ANY_TOPIC})

    def propose(self, ctx: RGContext) -> list[ResponseCandidate]:
        flag = ctx.nlu.red_flag
        if ctx.action is not SystemAction.RED_RESPONSE or flag is None:
            return []
        body = None
        if flag.specific_response_key:
            body = self.responses.get(flag.specific_response_key)
        if body is None:
            body = self.responses.get(f"category:{flag.category.value}")
        if body is None:
            body = self.responses.get("default", "I'd rather not get into that. ")
        return [ResponseCandidate(body=body, source_rg=self.rg_id, topic_agnostic=True)]
