"""Tokenization helpers shared across the NLU and DM modules."""

from __future__ import annotations

import re

_TOKEN_RE = re.compile(r"[a-z0-9']+")

# classic function words: used for content-token overlap metrics
STOPWORDS = frozenset(
    """a an the i you he she it we they me him her us them my your his its our
    their this that these those is are was were am be been being do does did
    have has had will would can could shall should may might must what who
    whom whose which when where why how and or but so because if then than as
    of in on at by for with about into onto from to up down over under not no
    nor too very just also there here all any both each some such only own
    same s t don um uh hmm""".split()
)

# broader list for noun-phrase chunking: function words plus common
# conversational verbs that never start an entity name
CHUNK_WORDS = STOPWORDS | frozenset(
    """yes yeah nope ok okay well please really quite let's lets like love
    hate want think thought know tell say said talk talking go going get got
    make made watch watched watching see saw seen read reading play played
    playing listen listening heard hear enjoy enjoyed favorite wonder""".split()
)


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens; apostrophes are kept inside tokens."""
    return _TOKEN_RE.findall(text.lower())


def detokenize(tokens: list[str]) -> str:
    return " ".join(tokens)


def content_tokens(text: str) -> set[str]:
    return {t for t in tokenize(text) if t not in STOPWORDS}


def jaccard(a: set[str], b: set[str]) -> float:
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    return len(a & b) / len(a | b)


def char_trigrams(text: str) -> dict[str, int]:
    padded = f"  {text.lower()} "
    grams: dict[str, int] = {}
    for i in range(len(padded) - 2):
        g = padded[i : i + 3]
        grams[g] = grams.get(g, 0) + 1
    return grams


def cosine(a: dict[str, int], b: dict[str, int]) -> float:
    if not a or not b:
        return 0.0
    dot = sum(v * b.get(k, 0) for k, v in a.items())
    na = sum(v * v for v in a.values()) ** 0.5
    nb = sum(v * v for v in b.values()) ** 0.5
    if na == 0 or nb == 0:
        return 0.0
    return dot / (na * nb)
