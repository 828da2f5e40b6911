"""Topic classes, topic detection and topic-state updates.

The registry is data-driven: packs declare topics with referential
expressions, keywords, subtopics, owned entity types and a priority.
The arrangement reflects conversational needs rather than real-world
taxonomy (artificial intelligence sits under science and technology).
Detection recognizes two invocation types: explicit mention of a topic
name/keyword, and mention of an entity whose type a topic owns; the
explicit form wins when both fire.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from .text import tokenize
from .types import (
    ConfigurationError,
    EntityType,
    InvocationType,
    LinkedEntity,
    NLUBundle,
    SystemAction,
    TopicSignal,
    TopicState,
)


@dataclass
class TopicClass:
    topic_id: str
    referential_expressions: list[str] = field(default_factory=list)
    keywords: list[str] = field(default_factory=list)
    subtopics: list[str] = field(default_factory=list)
    owned_types: list[EntityType] = field(default_factory=list)
    priority: int = 100


class TopicRegistry:
    def __init__(self, topics: list[TopicClass]) -> None:
        self.topics: dict[str, TopicClass] = {}
        for t in topics:
            if t.topic_id in self.topics:
                raise ConfigurationError(f"duplicate topic id {t.topic_id!r}")
            self.topics[t.topic_id] = t
        self.parent: dict[str, str] = {}
        for t in topics:
            for sub in t.subtopics:
                if sub not in self.topics:
                    raise ConfigurationError(
                        f"topic {t.topic_id!r} references unknown subtopic {sub!r}"
                    )
                self.parent[sub] = t.topic_id
        self.ordered = sorted(topics, key=lambda t: (t.priority, t.topic_id))
        # phrase -> topic id, longest phrases matched first
        self._phrases: list[tuple[tuple[str, ...], str]] = []
        for t in self.ordered:
            names = [t.topic_id.replace("_", " ")] + t.referential_expressions + t.keywords
            for name in names:
                toks = tuple(tokenize(name))
                if toks:
                    self._phrases.append((toks, t.topic_id))
        self._phrases.sort(key=lambda p: (-len(p[0]),))

    @classmethod
    def from_yaml(cls, path: str | Path) -> "TopicRegistry":
        try:
            doc = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise ConfigurationError(f"topic registry not found: {path}") from exc
        topics = []
        for row in doc.get("topics", []):
            topics.append(
                TopicClass(
                    topic_id=row["id"],
                    referential_expressions=list(row.get("referential_expressions", [])),
                    keywords=list(row.get("keywords", [])),
                    subtopics=list(row.get("subtopics", [])),
                    owned_types=[EntityType.parse(t) for t in row.get("owned_types", [])],
                    priority=int(row.get("priority", 100)),
                )
            )
        return cls(topics)

    def top_level(self, topic_id: str) -> str:
        """Subtopic detections count toward their top-level topic."""
        seen = set()
        while topic_id in self.parent and topic_id not in seen:
            seen.add(topic_id)
            topic_id = self.parent[topic_id]
        return topic_id

    def owned_types_map(self) -> dict[str, frozenset[EntityType]]:
        return {
            tid: frozenset(t.owned_types) for tid, t in self.topics.items() if t.owned_types
        }

    def topic_for_entity_type(self, etype: EntityType) -> Optional[str]:
        if etype == EntityType.OTHER:
            return None
        for t in self.ordered:
            if etype in t.owned_types:
                return self.top_level(t.topic_id)
        return None

    def find_explicit(self, text: str) -> Optional[tuple[str, tuple[int, int]]]:
        """Whole-token phrase scan; multiword phrases match greedily."""
        tokens = tokenize(text)
        if not tokens:
            return None
        for phrase, topic_id in self._phrases:
            n = len(phrase)
            for start in range(0, len(tokens) - n + 1):
                if tuple(tokens[start : start + n]) == phrase:
                    return self.top_level(topic_id), (start, start + n)
        return None


def entity_to_topic(entity: LinkedEntity, registry: TopicRegistry) -> Optional[str]:
    return registry.topic_for_entity_type(entity.entity_type)


def detect_topic(nlu: NLUBundle, registry: TopicRegistry) -> Optional[TopicSignal]:
    text = " ".join(seg.text for seg in nlu.segments if seg.text)
    explicit = registry.find_explicit(text)
    if explicit is not None:
        topic_id, span = explicit
        return TopicSignal(topic=topic_id, invocation_type=InvocationType.EXPLICIT_NAME, trigger_span=span)
    for entity in nlu.entities:
        topic_id = entity_to_topic(entity, registry)
        if topic_id is not None:
            return TopicSignal(
                topic=topic_id,
                invocation_type=InvocationType.ENTITY_IMPLIED,
                trigger_span=entity.span,
            )
    return None


def update_topic_state(
    state: TopicState,
    signal: Optional[TopicSignal],
    action: SystemAction,
) -> TopicState:
    """Pure update: returns a new TopicState with this turn assigned.

    A user invocation or a topic_change action switches the current
    topic; anything else continues it. Exactly one topic is assigned to
    the turn and the distribution is incremented for it. Consecutive
    duplicate history entries are collapsed.
    """
    assigned = state.current_topic
    if signal is not None:
        if action == SystemAction.TOPIC_CHANGE:
            assigned = signal.topic
        elif signal.invocation_type in (InvocationType.EXPLICIT_NAME, InvocationType.ENTITY_IMPLIED):
            assigned = signal.topic
    history = list(state.topic_history)
    if not history or history[-1] != assigned:
        history.append(assigned)
    distribution = dict(state.turn_distribution)
    distribution[assigned] = distribution.get(assigned, 0) + 1
    return TopicState(
        current_topic=assigned,
        topic_history=history,
        turn_distribution=distribution,
        user_entities=list(state.user_entities),
        system_entities=list(state.system_entities),
    )
