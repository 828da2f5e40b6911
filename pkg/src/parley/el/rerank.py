"""Margin-trained linear reranking of a candidate pool.

Features per (mention, candidate): candidate entity type, type/topic
compatibility, log popularity, character-trigram cosine between mention
and candidate surface, and exact-match flags. Ties keep a stable order:
popularity descending, then uri.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..text import char_trigrams, cosine
from ..types import EntityType
from .candidates import LookupEntry

WEIGHTS_FORMAT = "parley-rerank/1"


@dataclass
class RerankContext:
    topic: Optional[str] = None
    topic_types: frozenset[EntityType] = frozenset()
    expected_type: Optional[EntityType] = None


def rerank_features(mention: str, candidate: LookupEntry, ctx: RerankContext) -> dict[str, float]:
    feats: dict[str, float] = {
        f"type={candidate.entity_type.value}": 1.0,
        "log_pop": math.log10(1 + max(candidate.popularity, 0)),
        "cosine": cosine(char_trigrams(mention), char_trigrams(candidate.surface)),
    }
    if mention.lower().strip() == candidate.surface.lower().strip():
        feats["exact"] = 1.0
    if ctx.expected_type is not None and candidate.entity_type == ctx.expected_type:
        feats["expected_type"] = 1.0
    if ctx.topic_types and candidate.entity_type in ctx.topic_types:
        feats["topic_type"] = 1.0
    if ctx.topic:
        feats[f"topic={ctx.topic}|type={candidate.entity_type.value}"] = 1.0
    return feats


def _dot(weights: dict[str, float], feats: dict[str, float]) -> float:
    return sum(weights.get(k, 0.0) * v for k, v in feats.items())


@dataclass
class RerankerWeights:
    weights: dict[str, float] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def save(self, path: str | Path) -> None:
        doc = {"format": WEIGHTS_FORMAT, "weights": self.weights, "meta": self.meta}
        Path(path).write_text(json.dumps(doc, sort_keys=True), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "RerankerWeights":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if doc.get("format") != WEIGHTS_FORMAT:
            raise ValueError(f"unexpected weights format {doc.get('format')!r}")
        return cls(weights=doc["weights"], meta=doc.get("meta", {}))


def rerank(
    mention: str,
    pool: list[tuple[LookupEntry, float]],
    ctx: RerankContext,
    weights: RerankerWeights,
) -> list[tuple[LookupEntry, float]]:
    """Pool entries rescored and sorted descending."""
    rescored = []
    for entry, _retrieval_score in pool:
        score = _dot(weights.weights, rerank_features(mention, entry, ctx))
        rescored.append((entry, score))
    rescored.sort(key=lambda es: (-es[1], -es[0].popularity, es[0].uri))
    return rescored


def train_reranker(
    examples: list[tuple[str, list[tuple[LookupEntry, float]], str, RerankContext]],
    margin: float = 1.0,
    epochs: int = 10,
    seed: int = 0,
) -> RerankerWeights:
    """Margin-based perceptron over (mention, pool, gold_uri, context).

    The hinge constant defaults to 1.0 and there is no regularization;
    both are exposed for tuning.
    """
    if not examples:
        raise ValueError("no training examples")
    weights: dict[str, float] = {}
    rng = random.Random(seed)
    order = list(range(len(examples)))
    for _epoch in range(epochs):
        rng.shuffle(order)
        violations = 0
        for idx in order:
            mention, pool, gold_uri, ctx = examples[idx]
            gold_feats = None
            best_neg_feats = None
            best_neg_score = None
            for entry, _rs in pool:
                feats = rerank_features(mention, entry, ctx)
                score = _dot(weights, feats)
                if entry.uri == gold_uri:
                    if gold_feats is None:
                        gold_feats = feats
                elif best_neg_score is None or score > best_neg_score:
                    best_neg_score = score
                    best_neg_feats = feats
            if gold_feats is None or best_neg_feats is None:
                continue
            gold_score = _dot(weights, gold_feats)
            if gold_score < best_neg_score + margin:
                violations += 1
                for k, v in gold_feats.items():
                    weights[k] = weights.get(k, 0.0) + v
                for k, v in best_neg_feats.items():
                    weights[k] = weights.get(k, 0.0) - v
        if violations == 0:
            break
    return RerankerWeights(
        weights=weights, meta={"margin": margin, "epochs": epochs, "seed": seed}
    )
