"""Gazetteer-backed entity recognition.

A local inverted index stands in for a hosted search service. Relevance
scoring is fixed and testable: exact surface match scores 2.0, a
token-wise prefix of an entity name scores 1.2, anything else scores
its token Jaccard overlap in [0, 1].

Precision guards follow the ensemble recipe: only exact/prefix matches
link, a frequency-based common-phrase list suppresses conversational
noise ("cool", "how are you") unless curated as a real entity, and a
topic can restrict the searched entity types.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from ..text import jaccard, tokenize
from ..types import EntityType, LinkedEntity

logger = logging.getLogger(__name__)

EXACT_SCORE = 2.0
PREFIX_SCORE = 1.2
MAX_NAME_TOKENS = 6


@dataclass(frozen=True)
class GazetteerRecord:
    name: str
    entity_type: EntityType
    uri: str
    popularity: int = 0
    gender: Optional[str] = None
    summary: Optional[str] = None

    @property
    def name_tokens(self) -> tuple[str, ...]:
        return tuple(tokenize(self.name))


@dataclass
class Mention:
    span: tuple[int, int]
    surface: str
    candidates: list[tuple[GazetteerRecord, float]] = field(default_factory=list)


def relevance_score(query_tokens: tuple[str, ...], record: GazetteerRecord) -> float:
    name_tokens = record.name_tokens
    if query_tokens == name_tokens:
        return EXACT_SCORE
    if query_tokens and len(query_tokens) < len(name_tokens) and \
            name_tokens[: len(query_tokens)] == query_tokens:
        return PREFIX_SCORE
    return jaccard(set(query_tokens), set(name_tokens))


class GazetteerIndex:
    def __init__(self) -> None:
        self.records: list[GazetteerRecord] = []
        self._exact: dict[tuple[str, ...], list[int]] = {}
        self._by_token: dict[str, set[int]] = {}

    def __len__(self) -> int:
        return len(self.records)

    def add(self, record: GazetteerRecord) -> None:
        idx = len(self.records)
        self.records.append(record)
        toks = record.name_tokens
        self._exact.setdefault(toks, []).append(idx)
        for tok in set(toks):
            self._by_token.setdefault(tok, set()).add(idx)

    def exact_matches(
        self, tokens: tuple[str, ...], types: Optional[set[EntityType]] = None
    ) -> list[GazetteerRecord]:
        hits = [self.records[i] for i in self._exact.get(tokens, [])]
        if types is not None:
            hits = [r for r in hits if r.entity_type in types]
        return hits

    def lookup(
        self,
        query: str,
        types: Optional[set[EntityType]] = None,
        limit: int = 10,
    ) -> list[tuple[GazetteerRecord, float]]:
        """Scored candidates for a free-text query, best first."""
        query_tokens = tuple(tokenize(query))
        if not query_tokens:
            return []
        candidate_ids: set[int] = set()
        for tok in query_tokens:
            candidate_ids |= self._by_token.get(tok, set())
        scored = []
        for i in candidate_ids:
            record = self.records[i]
            if types is not None and record.entity_type not in types:
                continue
            score = relevance_score(query_tokens, record)
            if score > 0.0:
                scored.append((record, score))
        scored.sort(key=lambda rs: (-rs[1], -rs[0].popularity, rs[0].uri))
        return scored[:limit]


def build_gazetteer_index(records: Iterable[GazetteerRecord]) -> GazetteerIndex:
    index = GazetteerIndex()
    seen: set[tuple[str, EntityType, str]] = set()
    for record in records:
        key = (record.name.lower(), record.entity_type, record.uri)
        if key in seen:
            logger.warning("duplicate gazetteer row dropped: %s", key)
            continue
        seen.add(key)
        index.add(record)
    return index


def load_gazetteer(path: str | Path) -> list[GazetteerRecord]:
    records = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        records.append(
            GazetteerRecord(
                name=fields[0],
                entity_type=EntityType.parse(fields[1]),
                uri=fields[2],
                popularity=int(fields[3]) if len(fields) > 3 and fields[3] else 0,
                gender=fields[4] if len(fields) > 4 and fields[4] else None,
                summary=fields[5] if len(fields) > 5 and fields[5] else None,
            )
        )
    return records


@dataclass
class CommonPhraseList:
    """Phrases too frequent in chat to be entity mentions, minus curated
    exceptions that really are entities."""

    frequencies: dict[str, int] = field(default_factory=dict)
    cutoff: int = 60
    exceptions: set[str] = field(default_factory=set)

    def is_suppressed(self, phrase: str) -> bool:
        phrase = phrase.lower().strip()
        if phrase in self.exceptions:
            return False
        return self.frequencies.get(phrase, 0) > self.cutoff

    @classmethod
    def from_files(
        cls, freq_path: str | Path, exceptions_path: Optional[str | Path] = None, cutoff: int = 60
    ) -> "CommonPhraseList":
        frequencies: dict[str, int] = {}
        for line in Path(freq_path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            phrase, freq = line.split("\t")[:2]
            frequencies[phrase.lower()] = int(freq)
        exceptions: set[str] = set()
        if exceptions_path is not None:
            for line in Path(exceptions_path).read_text(encoding="utf-8").splitlines():
                line = line.strip()
                if line and not line.startswith("#"):
                    exceptions.add(line.lower())
        return cls(frequencies=frequencies, cutoff=cutoff, exceptions=exceptions)


def suppress_common(mentions: list[LinkedEntity], cpl: CommonPhraseList) -> list[LinkedEntity]:
    return [m for m in mentions if not cpl.is_suppressed(m.surface)]


def query_candidates(
    utterance: str,
    noun_phrases: list[tuple[int, int]],
    index: GazetteerIndex,
    types: Optional[set[EntityType]] = None,
) -> list[Mention]:
    """Candidate mentions with scored gazetteer candidates.

    Three query sources, mirroring the retrieval recipe: a longest-first
    exact n-gram scan over the utterance, a scored lookup per noun
    phrase, and an exact whole-utterance match. Mentions are unique per
    span with candidates sorted best-first, so exact matches outrank
    partial ones.
    """
    tokens = tokenize(utterance)
    mentions: dict[tuple[int, int], Mention] = {}
    covered: set[int] = set()

    for n in range(min(MAX_NAME_TOKENS, len(tokens)), 0, -1):
        for start in range(0, len(tokens) - n + 1):
            span = (start, start + n)
            if any(i in covered for i in range(*span)):
                continue
            gram = tuple(tokens[start : start + n])
            hits = index.exact_matches(gram, types)
            if hits:
                hits.sort(key=lambda r: (-r.popularity, r.uri))
                mentions[span] = Mention(
                    span=span,
                    surface=" ".join(gram),
                    candidates=[(r, EXACT_SCORE) for r in hits],
                )
                covered.update(range(*span))

    for span in noun_phrases:
        if span in mentions:
            continue
        phrase = " ".join(tokens[span[0] : span[1]])
        scored = index.lookup(phrase, types)
        if scored:
            mentions.setdefault(span, Mention(span=span, surface=phrase, candidates=scored))

    whole = (0, len(tokens))
    if tokens and whole not in mentions:
        hits = index.exact_matches(tuple(tokens), types)
        if hits:
            hits.sort(key=lambda r: (-r.popularity, r.uri))
            mentions[whole] = Mention(
                span=whole,
                surface=" ".join(tokens),
                candidates=[(r, EXACT_SCORE) for r in hits],
            )

    return [mentions[s] for s in sorted(mentions.keys())]
