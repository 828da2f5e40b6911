"""Entity-indexed fun-fact retrieval."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Optional

FUNFACT_PREFIX = "I wonder if you know that "


class FunFactIndex:
    def __init__(self, facts: dict[str, list[str]]) -> None:
        self.facts = facts

    def __len__(self) -> int:
        return sum(len(v) for v in self.facts.values())

    @classmethod
    def from_tsv(cls, path: str | Path) -> "FunFactIndex":
        facts: dict[str, list[str]] = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            uri, fact = line.split("\t")[:2]
            facts.setdefault(uri, []).append(fact)
        return cls(facts)


def funfact_retrieve(
    index: FunFactIndex,
    entity_uris: Iterable[str],
    used: set[str],
) -> Optional[tuple[str, str]]:
    """(prefixed fact, used-key) for the first linked entity that still
    has an unused fact."""
    for uri in entity_uris:
        for i, fact in enumerate(index.facts.get(uri, [])):
            key = f"{uri}|{i}"
            if key in used:
                continue
            return FUNFACT_PREFIX + fact, key
    return None
