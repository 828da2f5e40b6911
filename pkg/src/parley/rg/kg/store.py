"""Local triple store: the knowledge source for graph-based responses.

Triples load from a TSV pack file and are indexed by subject, relation
and object so single-hop and inverse lookups are in-memory dictionary
hits; no per-turn remote calls.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

logger = logging.getLogger(__name__)

OBJECT_KINDS = ("uri", "number", "string", "date")


@dataclass(frozen=True)
class Triple:
    subject: str
    relation: str
    obj: str
    obj_kind: str = "uri"

    @property
    def numeric(self) -> float:
        return float(self.obj)


class TripleStore:
    def __init__(self) -> None:
        self.triples: list[Triple] = []
        self._seen: set[Triple] = set()
        self.by_subject: dict[str, list[Triple]] = {}
        self.by_relation: dict[str, list[Triple]] = {}
        self.by_object: dict[str, list[Triple]] = {}
        self.skipped = 0

    def __len__(self) -> int:
        return len(self.triples)

    def add(self, triple: Triple) -> None:
        if triple in self._seen:
            return
        self._seen.add(triple)
        self.triples.append(triple)
        self.by_subject.setdefault(triple.subject, []).append(triple)
        self.by_relation.setdefault(triple.relation, []).append(triple)
        self.by_object.setdefault(triple.obj, []).append(triple)

    def outgoing(self, subject: str, relation: str) -> list[Triple]:
        return [t for t in self.by_subject.get(subject, []) if t.relation == relation]

    def incoming(self, obj: str, relation: str) -> list[Triple]:
        return [t for t in self.by_object.get(obj, []) if t.relation == relation]

    def instances(self, entity: str, relation: str, direction: str = "forward") -> list[Triple]:
        """Relation instances anchored at ``entity``: forward means the
        entity is the subject, inverse means it is the object."""
        if direction == "inverse":
            return self.incoming(entity, relation)
        return self.outgoing(entity, relation)


def load_triples(path: str | Path, relation_ids: set[str] | None = None) -> TripleStore:
    """Parse a TSV of (subject, relation, object, object_kind) rows.

    Malformed rows are skipped with a warning; the store reports the
    skip count. Duplicate triples collapse to one.
    """
    store = TripleStore()
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) < 3 or not fields[0] or not fields[1] or not fields[2]:
            store.skipped += 1
            logger.warning("%s:%d: malformed triple row skipped", path, lineno)
            continue
        obj_kind = fields[3] if len(fields) > 3 and fields[3] else "uri"
        if obj_kind not in OBJECT_KINDS:
            store.skipped += 1
            logger.warning("%s:%d: unknown object kind %r", path, lineno, obj_kind)
            continue
        if relation_ids is not None and fields[1] not in relation_ids:
            store.skipped += 1
            logger.warning("%s:%d: relation %r not in registry", path, lineno, fields[1])
            continue
        if obj_kind == "number":
            try:
                float(fields[2])
            except ValueError:
                store.skipped += 1
                logger.warning("%s:%d: non-numeric object %r", path, lineno, fields[2])
                continue
        store.add(Triple(subject=fields[0], relation=fields[1], obj=fields[2], obj_kind=obj_kind))
    if store.skipped:
        logger.warning("%s: skipped %d malformed rows", path, store.skipped)
    return store
