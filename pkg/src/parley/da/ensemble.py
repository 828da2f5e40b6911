"""Ensemble dialogue-act tagging.

Three local voices: the regex tagger, the n-gram linear model and a
small set of structural intent rules. Regex hits are conventionalized
phrasings and take precedence; the n-gram model fills in everything
else; rule intents append extra question-type distinctions.
"""

from __future__ import annotations

import math
from typing import Optional

from ..text import tokenize
from ..types import DALabel
from .ngram import NgramModel, tag_ngram
from .regex_tagger import RegexTagger

_WH_WORDS = frozenset({"what", "who", "whom", "whose", "which", "when", "where", "why", "how"})
_AUX_WORDS = frozenset(
    {"do", "does", "did", "are", "is", "was", "were", "can", "could", "would", "will", "have", "has"}
)


def heuristic_intents(segment_text: str) -> list[DALabel]:
    """Structural question-type cues that need no trained model."""
    tokens = tokenize(segment_text)
    if not tokens:
        return []
    intents: list[DALabel] = []
    first = tokens[0]
    bigram = " ".join(tokens[:2])
    trigram = " ".join(tokens[:3])
    if trigram in ("have you ever", "did you ever"):
        intents.append(DALabel.EXPERIENCE_QUESTION)
    elif bigram in ("should i", "do i"):
        intents.append(DALabel.ADVICE_QUESTION)
    elif "what do you think" in segment_text or "how do you feel" in segment_text:
        intents.append(DALabel.OPINION_QUESTION)
    elif first in _AUX_WORDS and len(tokens) > 1 and tokens[1] == "you":
        intents.append(DALabel.PERSONAL_QUESTION)
    elif first in _WH_WORDS:
        intents.append(DALabel.FACT_QUESTION)
    return intents


def ensemble_combine(
    regex_out: list[tuple[DALabel, float]],
    ngram_out: Optional[tuple[DALabel, float]],
    intents: list[DALabel],
) -> list[DALabel]:
    """Regex labels first, then the n-gram label, then rule intents.

    Never empty: with no evidence at all the segment defaults to
    statement-non-opinion.
    """
    combined: list[DALabel] = []
    for label, _conf in regex_out:
        if label not in combined:
            combined.append(label)
    if ngram_out is not None and ngram_out[0] not in combined:
        combined.append(ngram_out[0])
    for label in intents:
        if label not in combined:
            combined.append(label)
    if not combined:
        combined.append(DALabel.STATEMENT_NON_OPINION)
    return combined


class DAEnsemble:
    """Per-segment tagger combining all available voices."""

    def __init__(self, regex_tagger: RegexTagger, model: Optional[NgramModel] = None) -> None:
        self.regex_tagger = regex_tagger
        self.model = model

    def tag_segment(self, segment_text: str) -> list[tuple[DALabel, float]]:
        regex_out = self.regex_tagger.tag(segment_text)
        ngram_out = None
        ngram_conf = 0.0
        if self.model is not None and segment_text.strip():
            label, margin = tag_ngram(segment_text, self.model)
            ngram_out = (label, margin)
            ngram_conf = 1.0 / (1.0 + math.exp(-margin))
        intents = heuristic_intents(segment_text)
        labels = ensemble_combine(regex_out, ngram_out, intents)

        confidences: dict[DALabel, float] = {}
        for label, conf in regex_out:
            confidences[label] = conf
        if ngram_out is not None:
            confidences.setdefault(ngram_out[0], ngram_conf)
        return [(label, confidences.get(label, 0.5)) for label in labels]
