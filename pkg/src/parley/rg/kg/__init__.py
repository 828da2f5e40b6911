from .store import Triple, TripleStore, load_triples
from .templates import KGTemplatePack, RelationSpec, RelationTemplate, load_kg_templates
from .generator import (
    AMBIGUOUS,
    KGPack,
    Realization,
    favorite_entity_response,
    load_favorites,
    load_labels,
    on_topic_response,
    realize,
    resolve_focus,
    shift_topic_response,
    sparse_guard,
)
from .rg import KGRG

__all__ = [
    "Triple",
    "TripleStore",
    "load_triples",
    "KGTemplatePack",
    "RelationSpec",
    "RelationTemplate",
    "load_kg_templates",
    "AMBIGUOUS",
    "KGPack",
    "Realization",
    "favorite_entity_response",
    "load_favorites",
    "load_labels",
    "on_topic_response",
    "realize",
    "resolve_focus",
    "shift_topic_response",
    "sparse_guard",
    "KGRG",
]
