"""Relation registry and verbalization templates for the KG generator.

Each template turns one relation (or a pair, or a two-hop chain) into a
sentence. Threshold templates interpret numeric data and only fire when
the comparator strictly holds. Question suffixes become the hand-off
part of the response.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from ...types import ConfigurationError, DALabel

TEMPLATE_KINDS = ("single", "count", "pair", "chain", "threshold")


@dataclass(frozen=True)
class RelationSpec:
    relation: str
    direction: str = "forward"  # forward | inverse


@dataclass
class RelationInfo:
    relation_id: str
    complete: bool = False


@dataclass
class RelationTemplate:
    template_id: str
    kind: str
    texts: list[str]
    topic: Optional[str] = None
    relation: Optional[RelationSpec] = None
    hops: list[RelationSpec] = field(default_factory=list)
    requires_absent: Optional[RelationSpec] = None
    aggregate: Optional[str] = None  # mean | count
    comparator: Optional[str] = None  # ">" | "<"
    bound: Optional[float] = None
    questions: list[str] = field(default_factory=list)
    shift: bool = False
    min_count: int = 1
    dialogue_act: Optional[DALabel] = None


def _parse_relspec(raw, where: str) -> RelationSpec:
    if isinstance(raw, str):
        return RelationSpec(relation=raw)
    if isinstance(raw, dict) and "relation" in raw:
        direction = raw.get("direction", "forward")
        if direction not in ("forward", "inverse"):
            raise ConfigurationError(f"{where}: direction must be forward or inverse")
        return RelationSpec(relation=raw["relation"], direction=direction)
    raise ConfigurationError(f"{where}: bad relation spec {raw!r}")


@dataclass
class KGTemplatePack:
    relations: dict[str, RelationInfo]
    templates: list[RelationTemplate]

    def is_complete(self, relation_id: str) -> bool:
        info = self.relations.get(relation_id)
        return bool(info and info.complete)

    def for_topic(self, topic: str, shift: Optional[bool] = None) -> list[RelationTemplate]:
        out = []
        for t in self.templates:
            if t.topic is not None and t.topic != topic:
                continue
            if shift is not None and t.shift != shift:
                continue
            out.append(t)
        return out


def load_kg_templates(path: str | Path) -> KGTemplatePack:
    try:
        doc = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigurationError(f"KG template pack not found: {path}") from exc
    relations: dict[str, RelationInfo] = {}
    for rel_id, raw in (doc.get("relations") or {}).items():
        relations[rel_id] = RelationInfo(
            relation_id=rel_id, complete=bool((raw or {}).get("complete", False))
        )
    templates: list[RelationTemplate] = []
    for raw in doc.get("templates", []):
        tid = raw.get("id")
        if not tid:
            raise ConfigurationError(f"{path}: template without id")
        where = f"{path} template {tid!r}"
        kind = raw.get("kind")
        if kind not in TEMPLATE_KINDS:
            raise ConfigurationError(f"{where}: unknown kind {kind!r}")
        texts = raw.get("texts") or ([raw["text"]] if raw.get("text") else [])
        if not texts:
            raise ConfigurationError(f"{where}: needs text or texts")
        template = RelationTemplate(
            template_id=tid,
            kind=kind,
            texts=[str(t) for t in texts],
            topic=raw.get("topic"),
            relation=_parse_relspec(raw["relation"], where) if raw.get("relation") else None,
            hops=[_parse_relspec(h, where) for h in raw.get("hops", [])],
            requires_absent=_parse_relspec(raw["requires_absent"], where)
            if raw.get("requires_absent") else None,
            aggregate=raw.get("aggregate"),
            comparator=raw.get("comparator"),
            bound=float(raw["bound"]) if raw.get("bound") is not None else None,
            questions=[str(q) for q in raw.get("questions", [])],
            shift=bool(raw.get("shift", False)),
            min_count=int(raw.get("min_count", 1)),
            dialogue_act=DALabel.parse(raw["da"]) if raw.get("da") else None,
        )
        if template.kind in ("single", "count", "pair") and template.relation is None:
            raise ConfigurationError(f"{where}: kind {kind} needs a relation")
        if template.kind in ("chain", "threshold") and len(template.hops) != 2:
            raise ConfigurationError(f"{where}: kind {kind} needs exactly two hops")
        if template.kind == "threshold" and (
            template.aggregate not in ("mean", "count")
            or template.comparator not in (">", "<")
            or template.bound is None
        ):
            raise ConfigurationError(f"{where}: threshold needs aggregate, comparator and bound")
        templates.append(template)
    return KGTemplatePack(relations=relations, templates=templates)
