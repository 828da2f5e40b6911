"""Response pool builder.

Fans the dispatched RGs out under a per-RG timeout, joins results in
registration order so concurrency never affects selection, then refines
the pool: null responses are dropped, an allow-list of known
false-positive terms is masked before the profanity scan, and
candidates too similar to recent system utterances are removed.
"""

from __future__ import annotations

import logging
import re
from concurrent.futures import ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeoutError
from dataclasses import dataclass, field
from enum import Enum
from time import perf_counter

from ..text import content_tokens, jaccard
from ..types import DialogueState, ResponseCandidate
from ..rg.base import ResponseGenerator, RGContext

logger = logging.getLogger(__name__)


class RemovalReason(str, Enum):
    PROFANITY = "profanity"
    REPETITION = "repetition"
    MASKED_TERM_BYPASS = "masked-term false-positive-bypass"


@dataclass
class PoolConfig:
    per_rg_timeout: float = 0.3
    pool_deadline: float = 1.0
    repetition_threshold: float = 0.8
    repetition_window: int = 20
    profanity_terms: frozenset[str] = frozenset()
    masked_terms: tuple[str, ...] = ()
    mask_enabled: bool = True
    parallel: bool = True


@dataclass
class ResponsePool:
    candidates: list[ResponseCandidate] = field(default_factory=list)
    removed: list[tuple[ResponseCandidate, RemovalReason]] = field(default_factory=list)
    raw_count: int = 0
    timed_out: list[str] = field(default_factory=list)
    failed: list[str] = field(default_factory=list)


def _mask(text: str, masked_terms: tuple[str, ...]) -> str:
    for term in masked_terms:
        text = re.sub(rf"\b{re.escape(term)}\b", " ", text, flags=re.IGNORECASE)
    return text


def profanity_hit(text: str, terms: frozenset[str]) -> bool:
    return any(tok in terms for tok in content_tokens(text) | set(text.lower().split()))


def collect_candidates(
    rgs: list[tuple[ResponseGenerator, RGContext]],
    config: PoolConfig,
) -> tuple[list[ResponseCandidate], list[str], list[str]]:
    """Run propose() for every dispatched RG; late or failing RGs are
    dropped, never fatal."""
    results: list[ResponseCandidate] = []
    timed_out: list[str] = []
    failed: list[str] = []
    if not rgs:
        return results, timed_out, failed
    if not config.parallel:
        for rg, ctx in rgs:
            start = perf_counter()
            try:
                candidates = rg.propose(ctx)
            except Exception:
                logger.exception("RG %s failed", rg.rg_id)
                failed.append(rg.rg_id)
                continue
            if perf_counter() - start > config.per_rg_timeout:
                timed_out.append(rg.rg_id)
                continue
            results.extend(candidates)
        return results, timed_out, failed

    start = perf_counter()
    with ThreadPoolExecutor(max_workers=max(len(rgs), 1)) as pool:
        futures = [(rg, pool.submit(rg.propose, ctx)) for rg, ctx in rgs]
        deadline = start + min(config.per_rg_timeout, config.pool_deadline)
        for rg, future in futures:
            remaining = max(deadline - perf_counter(), 0.0)
            try:
                results.extend(future.result(timeout=remaining))
            except FutureTimeoutError:
                logger.warning("RG %s exceeded %.0f ms; dropped", rg.rg_id, config.per_rg_timeout * 1000)
                timed_out.append(rg.rg_id)
                future.cancel()
            except Exception:
                logger.exception("RG %s failed", rg.rg_id)
                failed.append(rg.rg_id)
    return results, timed_out, failed


def build_pool(
    rgs: list[tuple[ResponseGenerator, RGContext]],
    state: DialogueState,
    config: PoolConfig,
    apply_repetition_filter: bool = True,
) -> ResponsePool:
    raw, timed_out, failed = collect_candidates(rgs, config)
    pool = ResponsePool(raw_count=len(raw), timed_out=timed_out, failed=failed)

    recent_bodies = []
    if apply_repetition_filter:
        recent_bodies = [
            content_tokens(body) for body in state.recent_system_bodies(config.repetition_window)
        ]
    for candidate in raw:
        if not candidate.body or not candidate.body.strip():
            continue  # null response
        text = candidate.text
        if profanity_hit(text, config.profanity_terms):
            masked = _mask(text, config.masked_terms)
            if profanity_hit(masked, config.profanity_terms):
                pool.removed.append((candidate, RemovalReason.PROFANITY))
                continue
            if not config.mask_enabled:
                # an allow-listed term caused the hit but bypassing is off
                pool.removed.append((candidate, RemovalReason.MASKED_TERM_BYPASS))
                continue
        body_tokens = content_tokens(candidate.body)
        if any(
            jaccard(body_tokens, prev) >= config.repetition_threshold for prev in recent_bodies
        ):
            pool.removed.append((candidate, RemovalReason.REPETITION))
            continue
        pool.candidates.append(candidate)
    return pool
