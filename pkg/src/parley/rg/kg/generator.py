"""Knowledge-graph response generation.

Three response types: on-topic keeps elaborating on the focused entity,
shift-topic follows a graph link to a related entity (gated behind a
consent question), and favorite-entity introduces a curated popular
entity when the user has not taken the initiative.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from ...types import ConfigurationError, LinkedEntity
from .store import Triple, TripleStore
from .templates import KGTemplatePack, RelationSpec, RelationTemplate


@dataclass
class Realization:
    text: str
    question: Optional[str]
    used_keys: list[str]
    shift_target: Optional[str] = None
    template: Optional[RelationTemplate] = None


@dataclass
class KGPack:
    """Everything one topic family of KG responses needs."""

    store: TripleStore
    templates: KGTemplatePack
    labels: dict[str, str] = field(default_factory=dict)
    genders: dict[str, str] = field(default_factory=dict)
    popularity: dict[str, int] = field(default_factory=dict)
    favorites: dict[str, list[str]] = field(default_factory=dict)
    favorite_intros: dict[str, str] = field(default_factory=dict)

    def display(self, uri: str) -> str:
        return self.labels.get(uri, uri.replace("_", " "))

    def pronoun(self, uri: str) -> str:
        gender = self.genders.get(uri, "")
        return {"female": "She", "male": "He"}.get(gender, "They")


def load_labels(path: str | Path) -> tuple[dict[str, str], dict[str, str], dict[str, int]]:
    labels: dict[str, str] = {}
    genders: dict[str, str] = {}
    popularity: dict[str, int] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        labels[fields[0]] = fields[1] if len(fields) > 1 and fields[1] else fields[0]
        if len(fields) > 2 and fields[2]:
            genders[fields[0]] = fields[2]
        if len(fields) > 3 and fields[3]:
            popularity[fields[0]] = int(fields[3])
    return labels, genders, popularity


def load_favorites(path: str | Path) -> tuple[dict[str, list[str]], dict[str, str]]:
    try:
        doc = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    except FileNotFoundError as exc:
        raise ConfigurationError(f"favorites file not found: {path}") from exc
    favorites: dict[str, list[str]] = {}
    intros: dict[str, str] = {}
    for topic, raw in doc.items():
        favorites[topic] = list(raw.get("entities", []))
        intros[topic] = raw.get("intro", "One of my favorites is {entity}.")
    return favorites, intros


AMBIGUOUS = "ambiguous"


def resolve_focus(
    entities: list[LinkedEntity],
    expected_types: set,
    popularity: Optional[dict[str, int]] = None,
) -> tuple[Optional[LinkedEntity], str]:
    """Disambiguate candidate entities by expected type.

    Returns (entity, status) with status one of ok/none/ambiguous. Two
    same-type candidates resolve to the more popular one only when it is
    at least twice as popular."""
    matches = [e for e in entities if e.entity_type in expected_types]
    if not matches:
        return None, "none"
    if len(matches) == 1:
        return matches[0], "ok"
    popularity = popularity or {}
    ranked = sorted(matches, key=lambda e: -popularity.get(e.uri, 0))
    top, second = popularity.get(ranked[0].uri, 0), popularity.get(ranked[1].uri, 0)
    if top >= 2 * second and top > 0:
        return ranked[0], "ok"
    return None, AMBIGUOUS


def sparse_guard(instances: list[Triple], complete: bool) -> str:
    """Presentation choice for a relation: counts are only trustworthy
    when the pack vouches the relation is complete."""
    if not instances:
        return "skip"
    return "count" if complete else "single"


def _instance_key(entity: str, relation: str, obj: str) -> str:
    return f"{entity}|{relation}|{obj}"


def _fill(text: str, slots: dict[str, str]) -> Optional[str]:
    for k, v in slots.items():
        text = text.replace("{" + k + "}", v)
    if "{" in text:
        return None
    return text


def realize(
    entity: str,
    template: RelationTemplate,
    pack: KGPack,
    used: set[str],
    rng: random.Random,
) -> Optional[Realization]:
    """Verbalize one unused relation instance for ``entity``.

    Pair templates consume a second relation condition, chain templates
    traverse two hops, threshold templates only speak when the numeric
    comparison strictly holds."""
    store = pack.store
    base_slots = {"entity": pack.display(entity), "pronoun": pack.pronoun(entity)}

    def done(text_slots: dict[str, str], keys: list[str], shift_target=None) -> Optional[Realization]:
        text = _fill(rng.choice(template.texts), {**base_slots, **text_slots})
        if text is None:
            return None
        question = rng.choice(template.questions) if template.questions else None
        return Realization(
            text=text, question=question, used_keys=keys,
            shift_target=shift_target, template=template,
        )

    if template.kind == "single":
        spec = template.relation
        assert spec is not None
        for t in store.instances(entity, spec.relation, spec.direction):
            other = t.subject if spec.direction == "inverse" else t.obj
            key = _instance_key(entity, spec.relation, other)
            if key in used:
                continue
            return done({"object": pack.display(other) if t.obj_kind == "uri" or spec.direction == "inverse" else t.obj}, [key])
        return None

    if template.kind == "count":
        spec = template.relation
        assert spec is not None
        instances = store.instances(entity, spec.relation, spec.direction)
        if sparse_guard(instances, pack.templates.is_complete(spec.relation)) != "count":
            return None
        if len(instances) < template.min_count:
            return None
        key = _instance_key(entity, spec.relation, "<count>")
        if key in used:
            return None
        return done({"count": str(len(instances))}, [key])

    if template.kind == "pair":
        spec = template.relation
        assert spec is not None
        if template.requires_absent is not None:
            absent = template.requires_absent
            if store.instances(entity, absent.relation, absent.direction):
                return None
        for t in store.instances(entity, spec.relation, spec.direction):
            other = t.subject if spec.direction == "inverse" else t.obj
            key = _instance_key(entity, spec.relation, other)
            if key in used:
                continue
            return done({"object": pack.display(other)}, [key])
        return None

    if template.kind == "chain":
        hop1, hop2 = template.hops
        for t1 in store.instances(entity, hop1.relation, hop1.direction):
            mid = t1.subject if hop1.direction == "inverse" else t1.obj
            for t2 in store.instances(mid, hop2.relation, hop2.direction):
                end = t2.subject if hop2.direction == "inverse" else t2.obj
                key = _instance_key(entity, f"{hop1.relation}>{hop2.relation}", f"{mid}>{end}")
                if key in used:
                    continue
                end_display = pack.display(end) if t2.obj_kind == "uri" or hop2.direction == "inverse" else t2.obj
                shift_target = end if template.shift and (t2.obj_kind == "uri" or hop2.direction == "inverse") else None
                return done(
                    {"hop1": pack.display(mid), "hop2": end_display},
                    [key],
                    shift_target=shift_target,
                )
        return None

    if template.kind == "threshold":
        hop1, hop2 = template.hops
        values = []
        for t1 in store.instances(entity, hop1.relation, hop1.direction):
            mid = t1.subject if hop1.direction == "inverse" else t1.obj
            for t2 in store.instances(mid, hop2.relation, hop2.direction):
                if t2.obj_kind == "number":
                    values.append(t2.numeric)
        if not values:
            return None
        value = (sum(values) / len(values)) if template.aggregate == "mean" else float(len(values))
        holds = value > template.bound if template.comparator == ">" else value < template.bound
        if not holds:
            return None
        key = _instance_key(entity, f"threshold:{template.template_id}", "<agg>")
        if key in used:
            return None
        return done({"value": f"{value:.1f}"}, [key])

    return None


def on_topic_response(
    entity: str,
    topic: str,
    pack: KGPack,
    used: set[str],
    rng: random.Random,
) -> Optional[Realization]:
    """Keep elaborating on the focused entity with unused relations."""
    for template in pack.templates.for_topic(topic, shift=False):
        result = realize(entity, template, pack, used, rng)
        if result is not None:
            return result
    return None


def shift_topic_response(
    entity: str,
    topic: str,
    pack: KGPack,
    used: set[str],
    rng: random.Random,
) -> Optional[Realization]:
    """Follow a graph link to a new entity; the text asks for consent
    and the focus change is pending until the user agrees."""
    for template in pack.templates.for_topic(topic, shift=True):
        result = realize(entity, template, pack, used, rng)
        if result is not None and result.shift_target:
            return result
    return None


def favorite_entity_response(
    topic: str,
    pack: KGPack,
    visited: set[str],
    used: set[str],
    rng: random.Random,
) -> Optional[tuple[str, Realization]]:
    """Introduce an unvisited curated favorite with one fact about it.
    Favorites missing from the store are skipped."""
    intro_template = pack.favorite_intros.get(topic, "One of my favorites is {entity}.")
    for uri in pack.favorites.get(topic, []):
        if uri in visited:
            continue
        if uri not in pack.store.by_subject and uri not in pack.store.by_object:
            continue
        fact = on_topic_response(uri, topic, pack, used, rng)
        if fact is None:
            continue
        intro = _fill(intro_template, {"entity": pack.display(uri)})
        if intro is None:
            continue
        merged = Realization(
            text=f"{intro} {fact.text}",
            question=fact.question or "Do you want to hear more?",
            used_keys=fact.used_keys,
            template=fact.template,
        )
        return uri, merged
    return None
