"""Response builder: assemble parts and clean up the final text."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from ..types import ResponseCandidate, SystemResponse
from .ssml import inject_ssml, wrap_speak

_SPACE_BEFORE_PUNCT_RE = re.compile(r"\s+([.,!?;:])")
_REPEAT_PUNCT_RE = re.compile(r"([.,!?;:])\1+")


@dataclass
class MarkupConfig:
    enabled: bool = True
    default_params: list[str] = field(default_factory=lambda: ["rate_long_fact", "interjection"])


def clean_text(text: str) -> str:
    text = " ".join(text.split())
    text = _SPACE_BEFORE_PUNCT_RE.sub(r"\1", text)
    text = _REPEAT_PUNCT_RE.sub(r"\1", text)
    return text.strip()


def assemble(
    ground: Optional[str],
    candidate: ResponseCandidate,
    markup: Optional[MarkupConfig] = None,
) -> SystemResponse:
    """Parts in fixed order ground, opener, body, hand-off; whitespace
    and duplicated punctuation cleaned; markup injected when enabled."""
    response = SystemResponse(
        ground=clean_text(ground) if ground else None,
        opener=clean_text(candidate.opener) if candidate.opener else None,
        body=clean_text(candidate.body),
        handoff=clean_text(candidate.handoff) if candidate.handoff else None,
        source_rg=candidate.source_rg,
    )
    if markup is not None and markup.enabled:
        params = list(dict.fromkeys(markup.default_params + candidate.ssml_params))
        response.ssml = wrap_speak(inject_ssml(response.final_text, params))
    return response
