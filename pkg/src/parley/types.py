"""Shared domain types for the dialogue engine.

Everything that crosses a module boundary lives here: turns, NLU
annotations, conversation state, system responses and the DM-to-RG
contract types. All types serialize to plain dicts so that state can be
persisted and restored losslessly between turns.
"""

from __future__ import annotations

import base64
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional


class SystemAction(str, Enum):
    """The closed set of per-turn system actions."""

    PERFORM_REPEAT = "perform_repeat"
    CONV_CLOSING = "conv_closing"
    ADVISE_USAGE = "advise_usage"
    GREET = "greet"
    REPEAT_REQUEST = "repeat_request"
    WAIT_PROMPTING = "wait_prompting"
    RED_RESPONSE = "red_response"
    TOPIC_CHANGE = "topic_change"
    LIST_OPTIONS = "list_options"
    CONVERSE = "converse"


class DALabel(str, Enum):
    """Dialogue-act schema used by the taggers and the dialogue manager."""

    MORE_INFORMATION = "more-information"
    CHANGE_TOPIC = "change-topic"
    AVOID_TOPIC = "avoid-topic"
    DISCUSS_TOPIC = "discuss-topic"
    SIGNAL_NON_UNDERSTANDING = "signal-non-understanding"
    PERSONAL_QUESTION = "personal-question"
    EXPERIENCE_QUESTION = "experience-question"
    REQUEST_OPTIONS = "request-options"
    ADVICE_QUESTION = "advice-question"
    FACT_QUESTION = "fact-question"
    NO_ANSWER = "no-answer"
    YES_ANSWER = "yes-answer"
    ACKNOWLEDGEMENT = "acknowledgement"
    APOLOGY = "apology"
    COMPLAINT = "complaint"
    CONVERSATION_CLOSING = "conversation-closing"
    OPINION = "opinion"
    COMMAND = "command"
    COMMENT = "comment"
    STATEMENT_NON_OPINION = "statement-non-opinion"
    OPINION_QUESTION = "opinion_question"

    @classmethod
    def parse(cls, value: str) -> "DALabel":
        """Map a label string to the schema; unknown strings fall back to
        statement-non-opinion (the schema is closed)."""
        try:
            return cls(value)
        except ValueError:
            return cls.STATEMENT_NON_OPINION


class EntityType(str, Enum):
    ACTOR = "Actor"
    ALBUM = "Album"
    BOOK = "Book"
    DIRECTOR = "Director"
    MOVIE = "Movie"
    MUSICAL_ACT = "MusicalAct"
    MUSICIAN = "Musician"
    SONG = "Song"
    TV_SERIES = "TvSeries"
    SPORTS_PLAYER = "SportsPlayer"
    SPORTS_TEAM = "SportsTeam"
    OTHER = "Other"

    @classmethod
    def parse(cls, value: str) -> "EntityType":
        try:
            return cls(value)
        except ValueError:
            return cls.OTHER


class RedCategoryKind(str, Enum):
    PROFANITY = "profanity"
    CONTROVERSIAL = "controversial"
    SELF_HARM = "self_harm"
    FINANCIAL_ADVICE = "financial_advice"
    POLITICAL_HOT_BUTTON = "political_hot_button"
    OTHER_SENSITIVE = "other_sensitive"


class InvocationType(str, Enum):
    EXPLICIT_NAME = "explicit_name"
    ENTITY_IMPLIED = "entity_implied"
    NONE = "none"


@dataclass
class Turn:
    """One user turn. ``user_text`` simulates ASR output: lowercase,
    no punctuation guarantees."""

    conversation_id: str
    turn_index: int
    user_text: str
    timestamp: int = 0

    def to_dict(self) -> dict:
        return {
            "conversation_id": self.conversation_id,
            "turn_index": self.turn_index,
            "user_text": self.user_text,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Turn":
        return cls(
            conversation_id=d["conversation_id"],
            turn_index=d["turn_index"],
            user_text=d["user_text"],
            timestamp=d.get("timestamp", 0),
        )


@dataclass
class UtteranceSegment:
    """A dialogue-act-sized slice of a user turn.

    ``span`` indexes into the turn's token sequence; spans of the
    segments of one turn are ordered, non-overlapping and cover all
    tokens. ``text`` may omit boundary tokens (coordinators) that the
    span still accounts for.
    """

    text: str
    span: tuple[int, int]
    da_labels: list[tuple[DALabel, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "span": list(self.span),
            "da_labels": [[l.value, c] for l, c in self.da_labels],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "UtteranceSegment":
        return cls(
            text=d["text"],
            span=(d["span"][0], d["span"][1]),
            da_labels=[(DALabel.parse(l), c) for l, c in d.get("da_labels", [])],
        )


@dataclass
class LinkedEntity:
    """A mention linked to a canonical URI."""

    span: tuple[int, int]
    surface: str
    uri: str
    entity_type: EntityType
    score: float = 0.0
    source: str = "ensemble"

    def to_dict(self) -> dict:
        return {
            "span": list(self.span),
            "surface": self.surface,
            "uri": self.uri,
            "entity_type": self.entity_type.value,
            "score": self.score,
            "source": self.source,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LinkedEntity":
        return cls(
            span=(d["span"][0], d["span"][1]),
            surface=d["surface"],
            uri=d["uri"],
            entity_type=EntityType.parse(d["entity_type"]),
            score=d.get("score", 0.0),
            source=d.get("source", "ensemble"),
        )


@dataclass
class RedCategory:
    category: RedCategoryKind
    matched_pattern: str
    specific_response_key: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "category": self.category.value,
            "matched_pattern": self.matched_pattern,
            "specific_response_key": self.specific_response_key,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RedCategory":
        return cls(
            category=RedCategoryKind(d["category"]),
            matched_pattern=d["matched_pattern"],
            specific_response_key=d.get("specific_response_key"),
        )


@dataclass
class TopicSignal:
    topic: str
    invocation_type: InvocationType
    trigger_span: tuple[int, int] = (0, 0)

    def to_dict(self) -> dict:
        return {
            "topic": self.topic,
            "invocation_type": self.invocation_type.value,
            "trigger_span": list(self.trigger_span),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TopicSignal":
        return cls(
            topic=d["topic"],
            invocation_type=InvocationType(d["invocation_type"]),
            trigger_span=(d["trigger_span"][0], d["trigger_span"][1]),
        )


@dataclass
class NLUBundle:
    """All per-turn NLU annotations consumed by the dialogue manager."""

    segments: list[UtteranceSegment] = field(default_factory=list)
    entities: list[LinkedEntity] = field(default_factory=list)
    sentiment: float = 0.0
    red_flag: Optional[RedCategory] = None
    topic_signal: Optional[TopicSignal] = None
    noun_phrases: list[tuple[int, int]] = field(default_factory=list)

    def da_labels(self) -> list[DALabel]:
        """Union (order-preserving) of the DA labels over all segments."""
        seen: list[DALabel] = []
        for seg in self.segments:
            for label, _conf in seg.da_labels:
                if label not in seen:
                    seen.append(label)
        return seen

    def da_confidence(self, label: DALabel) -> float:
        """Highest confidence any segment assigns to ``label``."""
        best = 0.0
        for seg in self.segments:
            for seg_label, conf in seg.da_labels:
                if seg_label == label and conf > best:
                    best = conf
        return best

    def to_dict(self) -> dict:
        return {
            "segments": [s.to_dict() for s in self.segments],
            "entities": [e.to_dict() for e in self.entities],
            "sentiment": self.sentiment,
            "red_flag": self.red_flag.to_dict() if self.red_flag else None,
            "topic_signal": self.topic_signal.to_dict() if self.topic_signal else None,
            "noun_phrases": [list(s) for s in self.noun_phrases],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NLUBundle":
        return cls(
            segments=[UtteranceSegment.from_dict(s) for s in d.get("segments", [])],
            entities=[LinkedEntity.from_dict(e) for e in d.get("entities", [])],
            sentiment=d.get("sentiment", 0.0),
            red_flag=RedCategory.from_dict(d["red_flag"]) if d.get("red_flag") else None,
            topic_signal=TopicSignal.from_dict(d["topic_signal"]) if d.get("topic_signal") else None,
            noun_phrases=[(s[0], s[1]) for s in d.get("noun_phrases", [])],
        )


@dataclass
class SystemResponse:
    """A system reply split into its discourse parts.

    Final text is the single-space join of the non-empty parts in the
    fixed order ground, opener, body, hand-off.
    """

    body: str
    ground: Optional[str] = None
    opener: Optional[str] = None
    handoff: Optional[str] = None
    source_rg: str = ""
    ssml: Optional[str] = None

    @property
    def parts(self) -> list[str]:
        return [p for p in (self.ground, self.opener, self.body, self.handoff) if p]

    @property
    def final_text(self) -> str:
        return " ".join(" ".join(self.parts).split())

    def to_dict(self) -> dict:
        return {
            "body": self.body,
            "ground": self.ground,
            "opener": self.opener,
            "handoff": self.handoff,
            "source_rg": self.source_rg,
            "ssml": self.ssml,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SystemResponse":
        return cls(
            body=d["body"],
            ground=d.get("ground"),
            opener=d.get("opener"),
            handoff=d.get("handoff"),
            source_rg=d.get("source_rg", ""),
            ssml=d.get("ssml"),
        )


@dataclass
class TopicState:
    """Cross-turn topical memory."""

    current_topic: str
    topic_history: list[str] = field(default_factory=list)
    turn_distribution: dict[str, int] = field(default_factory=dict)
    user_entities: list[LinkedEntity] = field(default_factory=list)
    system_entities: list[LinkedEntity] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.topic_history:
            self.topic_history = [self.current_topic]

    def to_dict(self) -> dict:
        return {
            "current_topic": self.current_topic,
            "topic_history": list(self.topic_history),
            "turn_distribution": dict(self.turn_distribution),
            "user_entities": [e.to_dict() for e in self.user_entities],
            "system_entities": [e.to_dict() for e in self.system_entities],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TopicState":
        return cls(
            current_topic=d["current_topic"],
            topic_history=list(d["topic_history"]),
            turn_distribution={k: int(v) for k, v in d["turn_distribution"].items()},
            user_entities=[LinkedEntity.from_dict(e) for e in d.get("user_entities", [])],
            system_entities=[LinkedEntity.from_dict(e) for e in d.get("system_entities", [])],
        )


class Hardness(str, Enum):
    HARD = "hard"
    SOFT = "soft"


@dataclass
class ResponseConstraints:
    """The DM-to-RG contract for one turn.

    The topic is always present and hard; entity mentions and the
    dialogue act are soft unless flagged otherwise.
    """

    topic: str
    entity_mentions: list[str] = field(default_factory=list)
    dialogue_act: Optional[DALabel] = None
    new_topic_flag: bool = False
    hardness: dict[str, Hardness] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.hardness.setdefault("topic", Hardness.HARD)
        self.hardness.setdefault("entity_mentions", Hardness.SOFT)
        self.hardness.setdefault("dialogue_act", Hardness.SOFT)

    def to_dict(self) -> dict:
        return {
            "topic": self.topic,
            "entity_mentions": list(self.entity_mentions),
            "dialogue_act": self.dialogue_act.value if self.dialogue_act else None,
            "new_topic_flag": self.new_topic_flag,
            "hardness": {k: v.value for k, v in self.hardness.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ResponseConstraints":
        return cls(
            topic=d["topic"],
            entity_mentions=list(d.get("entity_mentions", [])),
            dialogue_act=DALabel.parse(d["dialogue_act"]) if d.get("dialogue_act") else None,
            new_topic_flag=d.get("new_topic_flag", False),
            hardness={k: Hardness(v) for k, v in d.get("hardness", {}).items()},
        )


@dataclass
class ResponseCandidate:
    """One candidate reply offered by an RG for the current turn."""

    body: str
    source_rg: str
    opener: Optional[str] = None
    handoff: Optional[str] = None
    topic: Optional[str] = None
    topic_agnostic: bool = False
    entities: list[str] = field(default_factory=list)
    dialogue_act: Optional[DALabel] = None
    preference: int = 0
    ssml_params: list[str] = field(default_factory=list)
    state_update: Optional[dict] = None

    @property
    def text(self) -> str:
        parts = [p for p in (self.opener, self.body, self.handoff) if p]
        return " ".join(" ".join(parts).split())


@dataclass
class DialogueState:
    """Everything the engine persists for one conversation.

    ``rg_state`` maps RG ids to opaque byte blobs so generators can
    evolve their private state formats independently.
    """

    conversation_id: str
    topic_state: TopicState
    history: list[tuple[Turn, SystemResponse]] = field(default_factory=list)
    rg_state: dict[str, bytes] = field(default_factory=dict)
    action_history: list[SystemAction] = field(default_factory=list)
    constraint_history: list[ResponseConstraints] = field(default_factory=list)

    @property
    def turn_count(self) -> int:
        return len(self.history)

    def last_response(self) -> Optional[SystemResponse]:
        return self.history[-1][1] if self.history else None

    def recent_system_bodies(self, n: int = 20) -> list[str]:
        return [resp.body for _turn, resp in self.history[-n:]]

    def to_dict(self) -> dict:
        return {
            "conversation_id": self.conversation_id,
            "topic_state": self.topic_state.to_dict(),
            "history": [
                [t.to_dict(), r.to_dict()] for t, r in self.history
            ],
            "rg_state": {
                k: base64.b64encode(v).decode("ascii") for k, v in self.rg_state.items()
            },
            "action_history": [a.value for a in self.action_history],
            "constraint_history": [c.to_dict() for c in self.constraint_history],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DialogueState":
        return cls(
            conversation_id=d["conversation_id"],
            topic_state=TopicState.from_dict(d["topic_state"]),
            history=[
                (Turn.from_dict(t), SystemResponse.from_dict(r))
                for t, r in d.get("history", [])
            ],
            rg_state={
                k: base64.b64decode(v) for k, v in d.get("rg_state", {}).items()
            },
            action_history=[SystemAction(a) for a in d.get("action_history", [])],
            constraint_history=[
                ResponseConstraints.from_dict(c) for c in d.get("constraint_history", [])
            ],
        )


@dataclass
class TurnTrace:
    """Debug record of one pass through the DM pipeline."""

    turn_index: int
    action: SystemAction
    constraints: Optional[ResponseConstraints] = None
    dispatched_rgs: list[str] = field(default_factory=list)
    pool_size: int = 0
    pool_after_filters: int = 0
    removals: list[dict] = field(default_factory=list)
    chosen_rg: str = ""
    used_fallback: bool = False
    fallback_reason: Optional[str] = None
    topic: str = ""
    ground: Optional[str] = None
    response_parts: dict[str, Optional[str]] = field(default_factory=dict)
    latency_ms: float = 0.0
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "turn_index": self.turn_index,
            "action": self.action.value,
            "constraints": self.constraints.to_dict() if self.constraints else None,
            "dispatched_rgs": list(self.dispatched_rgs),
            "pool_size": self.pool_size,
            "pool_after_filters": self.pool_after_filters,
            "removals": list(self.removals),
            "chosen_rg": self.chosen_rg,
            "used_fallback": self.used_fallback,
            "fallback_reason": self.fallback_reason,
            "topic": self.topic,
            "ground": self.ground,
            "response_parts": dict(self.response_parts),
            "latency_ms": self.latency_ms,
            "notes": list(self.notes),
        }


class ConfigurationError(Exception):
    """A content pack or config value is missing or malformed."""


class StateDecodeError(Exception):
    """A persisted conversation record could not be decoded."""

    def __init__(self, conversation_id: str, reason: str) -> None:
        super().__init__(f"cannot decode state for {conversation_id!r}: {reason}")
        self.conversation_id = conversation_id


class StorageError(Exception):
    """The state store is unavailable; the operation may be retried."""


def any_to_jsonable(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if hasattr(value, "to_dict"):
        return value.to_dict()
    return value
