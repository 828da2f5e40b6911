"""Heuristic back-off response ranking.

Selection criteria relax tier by tier: (1) topic, entity and dialogue
act all satisfied; (2) topic and entity; (3) topic; (4) anything. A
tier's members are ordered by the configured RG preference, then by the
RG's own candidate preference, with a seeded-random tie-break so runs
are reproducible. The scorer is pluggable so a trained ranker can slot
in behind the same interface.
"""

from __future__ import annotations

import random
from typing import Callable, Optional

from ..types import ResponseCandidate, ResponseConstraints
from .pool import ResponsePool


class EmptyPoolError(Exception):
    """Nothing survived filtering; the fallback strategy takes over."""


def _topic_ok(c: ResponseCandidate, constraints: ResponseConstraints) -> bool:
    return c.topic_agnostic or c.topic == constraints.topic


def _entity_ok(c: ResponseCandidate, constraints: ResponseConstraints) -> bool:
    if not constraints.entity_mentions:
        return True
    return bool(set(c.entities) & set(constraints.entity_mentions))


def _da_ok(c: ResponseCandidate, constraints: ResponseConstraints) -> bool:
    if constraints.dialogue_act is None:
        return True
    return c.dialogue_act == constraints.dialogue_act


TIER_PREDICATES = (
    lambda c, k: _topic_ok(c, k) and _entity_ok(c, k) and _da_ok(c, k),
    lambda c, k: _topic_ok(c, k) and _entity_ok(c, k),
    lambda c, k: _topic_ok(c, k),
    lambda c, k: True,
)

ScorerFn = Callable[[ResponseCandidate, ResponseConstraints], float]


def rank(
    pool: ResponsePool,
    constraints: ResponseConstraints,
    rg_preference: list[str],
    rng: random.Random,
    scorer: Optional[ScorerFn] = None,
) -> tuple[ResponseCandidate, int]:
    """The chosen candidate and its tier (1-based)."""
    if not pool.candidates:
        raise EmptyPoolError("response pool is empty")

    def pref_index(c: ResponseCandidate) -> int:
        try:
            return rg_preference.index(c.source_rg)
        except ValueError:
            return len(rg_preference)

    for tier, predicate in enumerate(TIER_PREDICATES, start=1):
        members = [c for c in pool.candidates if predicate(c, constraints)]
        if not members:
            continue
        if scorer is not None:
            best_score = max(scorer(c, constraints) for c in members)
            members = [c for c in members if scorer(c, constraints) == best_score]
        best_pref = min(pref_index(c) for c in members)
        members = [c for c in members if pref_index(c) == best_pref]
        best_cand_pref = min(c.preference for c in members)
        members = [c for c in members if c.preference == best_cand_pref]
        return (members[0] if len(members) == 1 else rng.choice(members)), tier
    raise EmptyPoolError("no tier matched")  # unreachable: tier 4 accepts anything
