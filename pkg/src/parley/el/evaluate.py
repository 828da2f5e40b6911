"""Precision/recall/F1 harness for entity linking.

Two evaluation categories: canonical form only (uri sets) and entity
plus type. Micro-averaged over utterances.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..types import LinkedEntity


@dataclass
class LinkingScores:
    precision: float
    recall: float
    f1: float
    true_positives: int
    predicted: int
    gold: int


def _prf(tp: int, predicted: int, gold: int) -> LinkingScores:
    precision = tp / predicted if predicted else 0.0
    recall = tp / gold if gold else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return LinkingScores(precision, recall, f1, tp, predicted, gold)


def evaluate_linking(
    gold: list[set[tuple[str, str]]],
    predicted: list[list[LinkedEntity]],
) -> dict[str, LinkingScores]:
    """``gold`` holds per-utterance sets of (uri, entity_type) pairs."""
    if len(gold) != len(predicted):
        raise ValueError("gold and predicted lengths differ")
    tp_e = pred_e = gold_e = 0
    tp_et = pred_et = gold_et = 0
    for gold_set, links in zip(gold, predicted):
        gold_uris = {uri for uri, _t in gold_set}
        pred_uris = {e.uri for e in links}
        tp_e += len(gold_uris & pred_uris)
        pred_e += len(pred_uris)
        gold_e += len(gold_uris)

        gold_pairs = set(gold_set)
        pred_pairs = {(e.uri, e.entity_type.value) for e in links}
        tp_et += len(gold_pairs & pred_pairs)
        pred_et += len(pred_pairs)
        gold_et += len(gold_pairs)
    return {
        "entity": _prf(tp_e, pred_e, gold_e),
        "entity+type": _prf(tp_et, pred_et, gold_et),
    }
