"""Lexicon-based sentiment scoring in [-1, 1].

Token valences are summed, a negation token flips the sign of valences
within the following three tokens, and the raw sum is squashed into the
output range. Deliberately small and deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from ..text import tokenize

NEGATIONS = frozenset(
    """not never no don't doesn't didn't can't cannot won't wouldn't isn't
    aren't wasn't weren't ain't hardly barely nothing""".split()
)

NEGATION_WINDOW = 3
_SQUASH_ALPHA = 15.0


@dataclass
class SentimentLexicon:
    valences: dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_tsv(cls, path: str | Path) -> "SentimentLexicon":
        valences: dict[str, float] = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            word, value = line.split("\t")[:2]
            valences[word.lower()] = float(value)
        return cls(valences)


def sentiment(text: str, lexicon: SentimentLexicon) -> float:
    tokens = tokenize(text)
    total = 0.0
    for i, token in enumerate(tokens):
        valence = lexicon.valences.get(token)
        if valence is None:
            continue
        window = tokens[max(0, i - NEGATION_WINDOW) : i]
        if any(t in NEGATIONS for t in window):
            valence = -valence
        total += valence
    if total == 0.0:
        return 0.0
    return total / math.sqrt(total * total + _SQUASH_ALPHA)
