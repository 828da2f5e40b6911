"""Parametrizable speech-markup injection.

Three methods, applied on request: a slight rate reduction for long
factual responses, interjection markup limited to a whitelist (most
interjections render inappropriately expressive), and an excited
emotion wrapper for templates annotated that way. The plain text is
always recoverable by stripping tags.
"""

from __future__ import annotations

import re

from ..text import tokenize

RATE_LONG_FACT = "rate_long_fact"
INTERJECTION = "interjection"
EXCITED = "excited"
VALID_PARAMS = frozenset({RATE_LONG_FACT, INTERJECTION, EXCITED})

LONG_FACT_TOKEN_COUNT = 25
REDUCED_RATE = "90%"

INTERJECTION_WHITELIST = frozenset({"wow", "ah", "aha", "hmm", "yay", "phew", "ouch", "oh"})

_TAG_RE = re.compile(r"<[^>]+>")
_LEAD_WORD_RE = re.compile(r"^(\w+)([,.!? ])")


class SSMLParamError(ValueError):
    pass


def strip_tags(markup: str) -> str:
    return _TAG_RE.sub("", markup)


def inject_ssml(text: str, params: list[str]) -> str:
    """Wrap ``text`` per the requested parameters; no params, no change."""
    for param in params:
        if param not in VALID_PARAMS:
            raise SSMLParamError(f"unknown SSML param {param!r}")
    out = text
    if INTERJECTION in params:
        match = _LEAD_WORD_RE.match(out)
        if match and match.group(1).lower() in INTERJECTION_WHITELIST:
            word, sep = match.group(1), match.group(2)
            out = f'<say-as interpret-as="interjection">{word}</say-as>{sep}' + out[match.end():]
    if RATE_LONG_FACT in params and len(tokenize(text)) > LONG_FACT_TOKEN_COUNT:
        out = f'<prosody rate="{REDUCED_RATE}">{out}</prosody>'
    if EXCITED in params:
        out = f'<amazon:emotion name="excited" intensity="medium">{out}</amazon:emotion>'
    return out


def wrap_speak(markup: str) -> str:
    return f"<speak>{markup}</speak>"
