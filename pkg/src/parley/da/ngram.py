"""Linear dialogue-act classifier over 2,3,4-gram features.

Trained with the averaged perceptron. Boundary padding guarantees every
segment, however short, produces at least one feature; a bias feature is
always active. Ties in scoring break to the lexicographically first
label so tagging is fully deterministic.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from ..text import tokenize
from ..types import DALabel

BIAS_FEATURE = "<bias>"
MODEL_FORMAT = "parley-ngram-da/1"


def ngram_features(text: str) -> list[str]:
    tokens = ["<s>"] + tokenize(text) + ["</s>"]
    feats = [BIAS_FEATURE]
    for n in (2, 3, 4):
        for i in range(len(tokens) - n + 1):
            feats.append(f"{n}:{' '.join(tokens[i : i + n])}")
    return feats


@dataclass
class NgramModel:
    labels: list[str]
    weights: dict[str, dict[str, float]] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def scores(self, feats: list[str]) -> dict[str, float]:
        scores = {label: 0.0 for label in self.labels}
        for feat in feats:
            per_label = self.weights.get(feat)
            if per_label is None:
                continue
            for label, w in per_label.items():
                scores[label] += w
        return scores

    def save(self, path: str | Path) -> None:
        doc = {
            "format": MODEL_FORMAT,
            "labels": self.labels,
            "weights": self.weights,
            "meta": self.meta,
        }
        Path(path).write_text(json.dumps(doc, sort_keys=True), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "NgramModel":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if doc.get("format") != MODEL_FORMAT:
            raise ValueError(f"unexpected model format {doc.get('format')!r}")
        return cls(labels=doc["labels"], weights=doc["weights"], meta=doc.get("meta", {}))


def _argmax(scores: dict[str, float], labels: list[str]) -> str:
    best = labels[0]
    best_score = scores[best]
    for label in labels[1:]:
        if scores[label] > best_score:
            best = label
            best_score = scores[label]
    return best


def train_ngram(
    corpus: list[tuple[str, DALabel]],
    epochs: int = 20,
    seed: int = 0,
) -> NgramModel:
    """Averaged-perceptron training; deterministic for a fixed seed.

    Once an epoch finishes without mistakes the weights are stable, so
    the remaining epochs are folded into the average arithmetically
    instead of being iterated.
    """
    if not corpus:
        raise ValueError("training corpus is empty")
    labels = sorted({label.value for _text, label in corpus})
    if len(labels) < 2:
        raise ValueError("training corpus must contain at least two labels")

    examples = [(ngram_features(text), label.value) for text, label in corpus]
    weights: dict[str, dict[str, float]] = {}
    totals: dict[str, dict[str, float]] = {}
    stamps: dict[str, dict[str, int]] = {}
    step = 0

    def bump(feat: str, label: str, delta: float) -> None:
        w = weights.setdefault(feat, {})
        u = totals.setdefault(feat, {})
        s = stamps.setdefault(feat, {})
        u[label] = u.get(label, 0.0) + (step - s.get(label, 0)) * w.get(label, 0.0)
        s[label] = step
        w[label] = w.get(label, 0.0) + delta

    rng = random.Random(seed)
    order = list(range(len(examples)))
    for epoch in range(epochs):
        rng.shuffle(order)
        mistakes = 0
        for idx in order:
            feats, gold = examples[idx]
            step += 1
            scores = {label: 0.0 for label in labels}
            for feat in feats:
                for label, w in weights.get(feat, {}).items():
                    scores[label] += w
            pred = _argmax(scores, labels)
            if pred != gold:
                mistakes += 1
                for feat in feats:
                    bump(feat, gold, 1.0)
                    bump(feat, pred, -1.0)
        if mistakes == 0:
            step += (epochs - epoch - 1) * len(examples)
            break

    averaged: dict[str, dict[str, float]] = {}
    denom = max(step, 1)
    for feat, per_label in weights.items():
        out: dict[str, float] = {}
        for label, w in per_label.items():
            u = totals[feat].get(label, 0.0) + (step - stamps[feat].get(label, 0)) * w
            if u != 0.0:
                out[label] = u / denom
        if out:
            averaged[feat] = out

    return NgramModel(
        labels=labels,
        weights=averaged,
        meta={"epochs": epochs, "seed": seed, "examples": len(examples)},
    )


def tag_ngram(text: str, model: NgramModel) -> tuple[DALabel, float]:
    """Best label plus margin over the runner-up."""
    feats = ngram_features(text)
    scores = model.scores(feats)
    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    best_label, best_score = ordered[0]
    margin = best_score - ordered[1][1] if len(ordered) > 1 else best_score
    return DALabel.parse(best_label), margin


def training_accuracy(corpus: list[tuple[str, DALabel]], model: NgramModel) -> float:
    if not corpus:
        return 0.0
    hits = sum(1 for text, label in corpus if tag_ngram(text, model)[0] == label)
    return hits / len(corpus)
