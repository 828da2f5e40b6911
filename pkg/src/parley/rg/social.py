"""Built-in RG for functional speech acts.

Covers the non-conversational system actions (greetings, closings,
repeats, usage advice, option menus, wait prompts) with templates from
the social pack so every action has a registered responder.
"""

from __future__ import annotations

from pathlib import Path

import yaml

from ..types import ConfigurationError, ResponseCandidate, SystemAction
from .base import ANY_TOPIC, ResponseGenerator, RGContext

SOCIAL_ACTIONS = frozenset(
    {
        SystemAction.GREET,
        SystemAction.CONV_CLOSING,
        SystemAction.ADVISE_USAGE,
        SystemAction.REPEAT_REQUEST,
        SystemAction.WAIT_PROMPTING,
        SystemAction.PERFORM_REPEAT,
        SystemAction.LIST_OPTIONS,
    }
)


def load_social_templates(path: str | Path) -> dict[str, list[str]]:
    try:
        doc = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    except FileNotFoundError as exc:
        raise ConfigurationError(f"social template pack not found: {path}") from exc
    templates = {k: [str(t) for t in v] for k, v in doc.items()}
    for action in SOCIAL_ACTIONS:
        if action is SystemAction.PERFORM_REPEAT:
            continue
        if not templates.get(action.value):
            raise ConfigurationError(f"social pack {path} missing templates for {action.value}")
    return templates


class SocialRG(ResponseGenerator):
    rg_id = "social"

    def __init__(self, templates: dict[str, list[str]], discussable_topics: list[str]) -> None:
        self.templates = templates
        self.discussable_topics = discussable_topics
        self.actions = SOCIAL_ACTIONS
        self.topics = frozenset({ANY_TOPIC})

    def _pick(self, ctx: RGContext, key: str) -> str:
        options = self.templates.get(key) or ["Alright."]
        return ctx.rng.choice(options)

    def propose(self, ctx: RGContext) -> list[ResponseCandidate]:
        action = ctx.action
        if action not in self.actions:
            return []
        if action is SystemAction.PERFORM_REPEAT:
            last = ctx.state.last_response()
            if last is None:
                body = self._pick(ctx, "nothing_to_repeat")
            else:
                body = last.final_text
            return [ResponseCandidate(body=body, source_rg=self.rg_id, topic_agnostic=True)]
        if action is SystemAction.LIST_OPTIONS:
            names = [t.replace("_", " ") for t in self.discussable_topics[:6]]
            menu = ", ".join(names[:-1]) + " or " + names[-1] if len(names) > 1 else names[0]
            body = self._pick(ctx, "list_options").replace("{options}", menu)
            return [ResponseCandidate(body=body, source_rg=self.rg_id, topic_agnostic=True)]
        body = self._pick(ctx, action.value)
        return [ResponseCandidate(body=body, source_rg=self.rg_id, topic_agnostic=True)]
