"""Candidate pool generation from a local lookup index.

Stands in for a hosted lookup service: a flat surface-to-uri table,
queried per mention, returning a relevance-ranked pool capped at one
thousand entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..text import jaccard, tokenize
from ..types import EntityType

MAX_POOL_SIZE = 1000


@dataclass(frozen=True)
class LookupEntry:
    surface: str
    uri: str
    entity_type: EntityType
    popularity: int = 0


class LookupIndex:
    def __init__(self, entries: list[LookupEntry]) -> None:
        self.entries = entries
        self._by_token: dict[str, set[int]] = {}
        for i, entry in enumerate(entries):
            for tok in set(tokenize(entry.surface)):
                self._by_token.setdefault(tok, set()).add(i)

    @classmethod
    def from_tsv(cls, path: str | Path) -> "LookupIndex":
        entries = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            entries.append(
                LookupEntry(
                    surface=fields[0],
                    uri=fields[1],
                    entity_type=EntityType.parse(fields[2]),
                    popularity=int(fields[3]) if len(fields) > 3 and fields[3] else 0,
                )
            )
        return cls(entries)


def candidate_pool(
    mention: str, index: LookupIndex, max_size: int = MAX_POOL_SIZE
) -> list[tuple[LookupEntry, float]]:
    """Ranked candidates for a mention, size-capped."""
    mention_tokens = tuple(tokenize(mention))
    if not mention_tokens:
        return []
    candidate_ids: set[int] = set()
    for tok in mention_tokens:
        candidate_ids |= index._by_token.get(tok, set())
    scored = []
    for i in candidate_ids:
        entry = index.entries[i]
        surface_tokens = tuple(tokenize(entry.surface))
        if mention_tokens == surface_tokens:
            score = 2.0
        elif len(mention_tokens) < len(surface_tokens) and \
                surface_tokens[: len(mention_tokens)] == mention_tokens:
            score = 1.2
        else:
            score = jaccard(set(mention_tokens), set(surface_tokens))
        if score > 0.0:
            scored.append((entry, score))
    scored.sort(key=lambda es: (-es[1], -es[0].popularity, es[0].uri))
    return scored[:max_size]
