"""Centering-style retrieval from an annotated response bank.

Responses are annotated with entity mentions and concept tags; the
scorer prefers candidates overlapping what the user just mentioned,
entity overlap counting double, with older turns decaying by half.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ...text import tokenize

STYLES = ("fact+opinion", "opinion", "fact")

ENTITY_WEIGHT = 2.0
CONCEPT_WEIGHT = 1.0
RECENCY_DECAY = 0.5


@dataclass(frozen=True)
class BankedResponse:
    text: str
    topic: str
    entities: tuple[str, ...] = ()
    concepts: tuple[str, ...] = ()
    style: str = "fact"


@dataclass
class MentionSnapshot:
    """What the user mentioned in one turn: linked uris plus raw tokens."""

    entity_uris: set[str]
    tokens: set[str]


class ResponseBank:
    def __init__(self, responses: list[BankedResponse]) -> None:
        self.responses = responses

    def __len__(self) -> int:
        return len(self.responses)

    def topics(self) -> set[str]:
        return {r.topic for r in self.responses}

    @classmethod
    def from_tsv(cls, path: str | Path) -> "ResponseBank":
        responses = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            responses.append(
                BankedResponse(
                    text=fields[0],
                    topic=fields[1],
                    entities=tuple(e for e in fields[2].split(",") if e) if len(fields) > 2 else (),
                    concepts=tuple(c for c in fields[3].split(",") if c) if len(fields) > 3 else (),
                    style=fields[4] if len(fields) > 4 and fields[4] else "fact",
                )
            )
        return cls(responses)


def _concept_hits(concepts: tuple[str, ...], tokens: set[str]) -> int:
    hits = 0
    for concept in concepts:
        concept_tokens = tokenize(concept)
        if concept_tokens and all(t in tokens for t in concept_tokens):
            hits += 1
    return hits


def centering_score(response: BankedResponse, mentions: list[MentionSnapshot]) -> float:
    score = 0.0
    weight = 1.0
    for snapshot in mentions:
        entity_overlap = len(set(response.entities) & snapshot.entity_uris)
        concept_overlap = _concept_hits(response.concepts, snapshot.tokens)
        score += weight * (ENTITY_WEIGHT * entity_overlap + CONCEPT_WEIGHT * concept_overlap)
        weight *= RECENCY_DECAY
    return score


def centering_retrieve(
    bank: ResponseBank,
    topic: str,
    mentions: list[MentionSnapshot],
    used: set[int],
) -> Optional[tuple[int, BankedResponse, float]]:
    """Best unused response for the topic; ties go to the lower bank
    index; no overlap at all means no response."""
    best: Optional[tuple[int, BankedResponse, float]] = None
    for i, response in enumerate(bank.responses):
        if i in used or response.topic != topic:
            continue
        score = centering_score(response, mentions)
        if score <= 0.0:
            continue
        if best is None or score > best[2]:
            best = (i, response, score)
    return best
