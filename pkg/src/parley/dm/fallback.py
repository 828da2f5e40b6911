"""Fallback strategy: graceful forward motion when the pool is empty.

Initiates a previously unvisited topic, or prompts the user for one
when the system has been driving too long (or nothing is left). The
template pack is a crafted set; consecutive fallbacks never reuse the
same template.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import yaml

from ..types import ConfigurationError, ResponseCandidate
from .initiative import InitiativeDecision

FALLBACK_RG_ID = "fallback"


@dataclass
class FallbackTemplates:
    initiate: list[str]
    prompt: list[str]

    @classmethod
    def from_yaml(cls, path: str | Path) -> "FallbackTemplates":
        try:
            doc = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        except FileNotFoundError as exc:
            raise ConfigurationError(f"fallback template pack not found: {path}") from exc
        initiate = [str(t) for t in doc.get("initiate", [])]
        prompt = [str(t) for t in doc.get("prompt", [])]
        if not initiate or not prompt:
            raise ConfigurationError(f"fallback pack {path} needs 'initiate' and 'prompt' templates")
        return cls(initiate=initiate, prompt=prompt)


def fallback(
    decision: InitiativeDecision,
    templates: FallbackTemplates,
    last_template: Optional[str],
    rng: random.Random,
    opener: Optional[str] = None,
) -> tuple[ResponseCandidate, str]:
    """(candidate, template key used). The key feeds the no-consecutive-
    repeat rule on the next fallback."""
    if decision.kind == "system_topic" and decision.topic is not None:
        options = [("initiate", i, t) for i, t in enumerate(templates.initiate)]
        topic_display = decision.topic.replace("_", " ")
    else:
        options = [("prompt", i, t) for i, t in enumerate(templates.prompt)]
        topic_display = ""
    keyed = [(f"{kind}:{i}", t) for kind, i, t in options]
    viable = [kt for kt in keyed if kt[0] != last_template] or keyed
    key, template = viable[0] if len(viable) == 1 else rng.choice(viable)
    body = template.replace("{topic}", topic_display)
    candidate = ResponseCandidate(
        body=body,
        opener=opener or None,
        source_rg=FALLBACK_RG_ID,
        topic=decision.topic,
        topic_agnostic=True,
    )
    return candidate, key
