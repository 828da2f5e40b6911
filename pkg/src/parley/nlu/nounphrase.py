"""Heuristic noun-phrase spans: maximal runs of non-function tokens."""

from __future__ import annotations

from ..text import CHUNK_WORDS, tokenize

MAX_CHUNK_TOKENS = 6


def noun_phrase_spans(text: str) -> list[tuple[int, int]]:
    tokens = tokenize(text)
    spans: list[tuple[int, int]] = []
    start = None
    for i, token in enumerate(tokens + [""]):  # sentinel flushes the last run
        is_content = bool(token) and token not in CHUNK_WORDS
        if is_content and start is None:
            start = i
        elif not is_content and start is not None:
            end = i
            while end - start > MAX_CHUNK_TOKENS:
                spans.append((start, start + MAX_CHUNK_TOKENS))
                start += MAX_CHUNK_TOKENS
            spans.append((start, end))
            start = None
    return spans
