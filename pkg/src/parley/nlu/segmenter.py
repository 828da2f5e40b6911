"""Rule-based utterance segmentation.

ASR text arrives uncased and unpunctuated, so segmentation works purely
from lexical cues: a leading affirmation/negation is split off, a
coordinator or discourse marker directly followed by a question starter
opens a new segment, and overlong segments are broken at a token cap.
Rules are applied to a fixpoint so re-segmenting any returned segment
yields that segment again.

The segmenter is one implementation behind a small interface; anything
that maps a token sequence to covering, ordered segments can replace it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..text import tokenize
from ..types import UtteranceSegment

DEFAULT_MAX_SEGMENT_TOKENS = 25


@dataclass
class SegmenterModel:
    affirmations: frozenset[str] = frozenset()
    coordinators: frozenset[str] = frozenset()
    discourse_markers: frozenset[str] = frozenset()
    question_starters: frozenset[str] = frozenset()
    max_segment_tokens: int = DEFAULT_MAX_SEGMENT_TOKENS

    @classmethod
    def from_cue_dir(cls, cue_dir: str | Path) -> "SegmenterModel":
        cue_dir = Path(cue_dir)

        def read(name: str) -> frozenset[str]:
            path = cue_dir / name
            lines = path.read_text(encoding="utf-8").split("\n")
            return frozenset(w.strip() for w in lines if w.strip() and not w.startswith("#"))

        return cls(
            affirmations=read("affirmations.txt"),
            coordinators=read("coordinators.txt"),
            discourse_markers=read("discourse_markers.txt"),
            question_starters=read("question_starters.txt"),
        )


def _first_boundary(tokens: list[str], start: int, end: int, model: SegmenterModel):
    """Return (split_index, strip_boundary_token) or None.

    ``split_index`` is the first token of the right-hand segment. When
    ``strip_boundary_token`` is set, the token just before the split is a
    coordinator that stays inside the left span but out of its text.
    """
    n = end - start
    if n <= 1:
        return None
    if tokens[start] in model.affirmations:
        return start + 1, False
    candidates: list[tuple[int, bool]] = []
    joiners = model.coordinators | model.discourse_markers
    for k in range(start + 1, end - 1):
        if tokens[k] in joiners and tokens[k + 1] in model.question_starters:
            candidates.append((k + 1, True))
            break
    if n > model.max_segment_tokens:
        candidates.append((start + model.max_segment_tokens, False))
    if not candidates:
        return None
    return min(candidates)


def segment_tokens(tokens: list[str], model: SegmenterModel) -> list[UtteranceSegment]:
    if not tokens:
        return [UtteranceSegment(text="", span=(0, 0))]
    segments: list[UtteranceSegment] = []
    start = 0
    end = len(tokens)
    while start < end:
        boundary = _first_boundary(tokens, start, end, model)
        if boundary is None:
            segments.append(
                UtteranceSegment(text=" ".join(tokens[start:end]), span=(start, end))
            )
            break
        split, strip = boundary
        text_end = split - 1 if strip else split
        segments.append(
            UtteranceSegment(text=" ".join(tokens[start:text_end]), span=(start, split))
        )
        start = split
    return segments


def segment_utterance(text: str, model: SegmenterModel) -> list[UtteranceSegment]:
    """Total, deterministic segmentation of raw utterance text."""
    return segment_tokens(tokenize(text), model)
