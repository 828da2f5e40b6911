"""Grounding strategy: the backward-looking part of every response.

Grounds are conditioned on dialogue act, named entities and sentiment,
and deliberately independent of the topic so they can be emitted early
as progressive partial responses. Command, opinion and comment acts get
finer-grained handling; entity mentions get a short, general
repetition; the rest fall back to pure backchannels.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from ..types import ConfigurationError, DALabel, NLUBundle

POSITIVE_THRESHOLD = 0.3
NEGATIVE_THRESHOLD = -0.3

_DEFAULTS = {
    "entity_echo": ["Ah, {entity}? Hmm.", "{entity}, ok.", "{entity}, that's cool."],
    "command_ack": ["Sure.", "Ok then."],
    "opinion_positive": ["That's cool.", "Nice!"],
    "opinion_negative": ["Oh, I see.", "Hmm, I hear you."],
    "comment_neutral": ["I see.", "Right."],
    "yes_ack": ["Great."],
    "no_ack": ["Ok."],
    "backchannel": ["Mhm.", "I see."],
}


@dataclass
class GroundingTemplates:
    templates: dict[str, list[str]] = field(default_factory=lambda: dict(_DEFAULTS))

    @classmethod
    def from_yaml(cls, path: str | Path) -> "GroundingTemplates":
        try:
            doc = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        except FileNotFoundError as exc:
            raise ConfigurationError(f"grounding template pack not found: {path}") from exc
        merged = dict(_DEFAULTS)
        merged.update({k: [str(t) for t in v] for k, v in doc.items()})
        return cls(templates=merged)

    def pick(self, key: str, rng: random.Random) -> str:
        options = self.templates.get(key) or _DEFAULTS.get(key) or ["Ok."]
        return rng.choice(options)


def ground(
    nlu: NLUBundle,
    templates: GroundingTemplates,
    rng: random.Random,
) -> Optional[str]:
    """Backward-looking ground, or None when there is nothing to ground.

    Depends only on the dialogue acts, entities and sentiment of the
    user turn, never on the topic.
    """
    if not any(seg.text for seg in nlu.segments):
        return None
    das = set(nlu.da_labels())
    entity = nlu.entities[0].surface if nlu.entities else None

    if DALabel.COMMAND in das:
        return templates.pick("command_ack", rng)
    if DALabel.OPINION in das or DALabel.COMMENT in das or DALabel.COMPLAINT in das:
        if entity is not None:
            return templates.pick("entity_echo", rng).replace("{entity}", entity)
        if nlu.sentiment > POSITIVE_THRESHOLD:
            return templates.pick("opinion_positive", rng)
        if nlu.sentiment < NEGATIVE_THRESHOLD:
            return templates.pick("opinion_negative", rng)
        return templates.pick("comment_neutral", rng)
    if entity is not None:
        return templates.pick("entity_echo", rng).replace("{entity}", entity)
    if DALabel.YES_ANSWER in das:
        return templates.pick("yes_ack", rng)
    if DALabel.NO_ANSWER in das:
        return templates.pick("no_ack", rng)
    question_das = {
        DALabel.FACT_QUESTION,
        DALabel.PERSONAL_QUESTION,
        DALabel.OPINION_QUESTION,
        DALabel.EXPERIENCE_QUESTION,
        DALabel.ADVICE_QUESTION,
        DALabel.REQUEST_OPTIONS,
    }
    if das & question_das:
        return None  # answer directly, no ground
    if DALabel.ACKNOWLEDGEMENT in das or DALabel.STATEMENT_NON_OPINION in das:
        return templates.pick("backchannel", rng)
    return None
