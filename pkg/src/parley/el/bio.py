"""BIO mention tagging with a structured perceptron and Viterbi decoding.

Tags are ordered O, B, I; that order is also the tie-break preference,
so an untrained (all-zero) model decodes everything as O. The decoder
never emits I after O or at the start: those transitions are hard
forbidden, which keeps every output a valid BIO sequence.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

TAGS = ("O", "B", "I")
START = "<s>"
NEG_INF = float("-inf")
WEIGHTS_FORMAT = "parley-bio/1"

FeatureSeq = Sequence[Sequence[str]]


def _forbidden(prev: str, cur: str) -> bool:
    return cur == "I" and prev in (START, "O")


@dataclass
class BIOWeights:
    emissions: dict[str, dict[str, float]] = field(default_factory=dict)
    transitions: dict[str, float] = field(default_factory=dict)

    def emit(self, feats: Sequence[str], tag: str) -> float:
        total = 0.0
        for feat in feats:
            per_tag = self.emissions.get(feat)
            if per_tag:
                total += per_tag.get(tag, 0.0)
        return total

    def trans(self, prev: str, cur: str) -> float:
        return self.transitions.get(f"{prev}>{cur}", 0.0)

    def save(self, path: str | Path) -> None:
        doc = {
            "format": WEIGHTS_FORMAT,
            "emissions": self.emissions,
            "transitions": self.transitions,
        }
        Path(path).write_text(json.dumps(doc, sort_keys=True), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "BIOWeights":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if doc.get("format") != WEIGHTS_FORMAT:
            raise ValueError(f"unexpected weights format {doc.get('format')!r}")
        return cls(emissions=doc["emissions"], transitions=doc["transitions"])


def token_features(
    tokens: Sequence[str],
    i: int,
    gazetteer_types: Optional[Sequence[str]] = None,
    topic: Optional[str] = None,
    da: Optional[str] = None,
) -> list[str]:
    """Feature template for one position: identity, context n-grams,
    gazetteer membership flags, topic and dialogue act."""
    prev = tokens[i - 1] if i > 0 else START
    prev2 = tokens[i - 2] if i > 1 else START
    nxt = tokens[i + 1] if i + 1 < len(tokens) else "</s>"
    feats = [
        f"w={tokens[i]}",
        f"w-1={prev}",
        f"w+1={nxt}",
        f"bi-1={prev} {tokens[i]}",
        f"bi+1={tokens[i]} {nxt}",
        f"tri={prev2} {prev} {tokens[i]}",
    ]
    for t in gazetteer_types or ():
        feats.append(f"gaz={t}")
    if topic:
        feats.append(f"topic={topic}")
    if da:
        feats.append(f"da={da}")
    return feats


def sequence_score(feats: FeatureSeq, tags: Sequence[str], weights: BIOWeights) -> float:
    """Path score accumulated left to right, exactly as the decoder does."""
    score = 0.0
    prev = START
    for i, tag in enumerate(tags):
        if _forbidden(prev, tag):
            return NEG_INF
        score = score + weights.trans(prev, tag)
        score = score + weights.emit(feats[i], tag)
        prev = tag
    return score


def bio_decode(feats: FeatureSeq, weights: BIOWeights) -> list[str]:
    """Max-scoring valid tag sequence (Viterbi); ties prefer O, then B."""
    m = len(feats)
    if m == 0:
        return []
    emit_cache = [{tag: weights.emit(feats[i], tag) for tag in TAGS} for i in range(m)]

    viterbi: list[dict[str, float]] = [{}]
    backptr: list[dict[str, str]] = [{}]
    for tag in TAGS:
        if _forbidden(START, tag):
            viterbi[0][tag] = NEG_INF
        else:
            viterbi[0][tag] = weights.trans(START, tag) + emit_cache[0][tag]
        backptr[0][tag] = START

    for i in range(1, m):
        viterbi.append({})
        backptr.append({})
        for tag in TAGS:
            best_score = NEG_INF
            best_prev = None
            for prev in TAGS:
                if _forbidden(prev, tag) or viterbi[i - 1][prev] == NEG_INF:
                    continue
                score = (viterbi[i - 1][prev] + weights.trans(prev, tag)) + emit_cache[i][tag]
                if best_prev is None or score > best_score:
                    best_score = score
                    best_prev = prev
            viterbi[i][tag] = best_score if best_prev is not None else NEG_INF
            backptr[i][tag] = best_prev or START

    last = TAGS[0]
    for tag in TAGS[1:]:
        if viterbi[m - 1][tag] > viterbi[m - 1][last]:
            last = tag
    tags = [last]
    for i in range(m - 1, 0, -1):
        last = backptr[i][last]
        tags.append(last)
    tags.reverse()
    return tags


def decode_score(feats: FeatureSeq, weights: BIOWeights) -> float:
    return sequence_score(feats, bio_decode(feats, weights), weights)


def validate_tags(tags: Sequence[str]) -> None:
    prev = START
    for tag in tags:
        if tag not in TAGS:
            raise ValueError(f"unknown tag {tag!r}")
        if _forbidden(prev, tag):
            raise ValueError(f"invalid BIO sequence: {tag} after {prev}")
        prev = tag


def bio_train(
    annotated: list[tuple[FeatureSeq, Sequence[str]]],
    epochs: int = 10,
    seed: int = 0,
) -> BIOWeights:
    """Structured perceptron: update against the Viterbi-best sequence."""
    if not annotated:
        raise ValueError("training set is empty")
    for feats, tags in annotated:
        if len(feats) != len(tags):
            raise ValueError(
                f"feature/tag length mismatch: {len(feats)} features vs {len(tags)} tags"
            )
        validate_tags(tags)

    weights = BIOWeights()

    def bump_emit(feat: str, tag: str, delta: float) -> None:
        per_tag = weights.emissions.setdefault(feat, {})
        per_tag[tag] = per_tag.get(tag, 0.0) + delta

    def bump_trans(prev: str, cur: str, delta: float) -> None:
        key = f"{prev}>{cur}"
        weights.transitions[key] = weights.transitions.get(key, 0.0) + delta

    rng = random.Random(seed)
    order = list(range(len(annotated)))
    for _epoch in range(epochs):
        rng.shuffle(order)
        mistakes = 0
        for idx in order:
            feats, gold = annotated[idx]
            pred = bio_decode(feats, weights)
            if list(pred) == list(gold):
                continue
            mistakes += 1
            prev_gold = prev_pred = START
            for i in range(len(gold)):
                if gold[i] != pred[i] or prev_gold != prev_pred:
                    bump_trans(prev_gold, gold[i], 1.0)
                    bump_trans(prev_pred, pred[i], -1.0)
                if gold[i] != pred[i]:
                    for feat in feats[i]:
                        bump_emit(feat, gold[i], 1.0)
                        bump_emit(feat, pred[i], -1.0)
                prev_gold, prev_pred = gold[i], pred[i]
        if mistakes == 0:
            break
    return weights


def sequence_accuracy(
    annotated: list[tuple[FeatureSeq, Sequence[str]]], weights: BIOWeights
) -> float:
    if not annotated:
        return 0.0
    hits = sum(1 for feats, tags in annotated if bio_decode(feats, weights) == list(tags))
    return hits / len(annotated)


def spans_from_tags(tags: Sequence[str]) -> list[tuple[int, int]]:
    """B..I runs as half-open spans."""
    spans = []
    start = None
    for i, tag in enumerate(tags):
        if tag == "B":
            if start is not None:
                spans.append((start, i))
            start = i
        elif tag == "O":
            if start is not None:
                spans.append((start, i))
                start = None
    if start is not None:
        spans.append((start, len(tags)))
    return spans
