"""Persona backstory answers for common "favorite" questions.

A regex table maps question patterns to curated answers. The persona is
robot-aware, so a load-time lint rejects answers claiming human
experiences from a small deny-lexicon.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Optional

from ...types import ConfigurationError

# first-person human-experience claims the persona must not make
PERSONA_DENY_LEXICON = (
    "when i was a child",
    "when i was young",
    "when i was a kid",
    "i grew up",
    "my childhood",
    "my parents",
    "i ate",
    "i tasted",
    "i smelled",
    "i traveled to",
    "my family",
)


class BackstoryTable:
    def __init__(self, rows: list[tuple[re.Pattern, str]]) -> None:
        self.rows = rows

    @classmethod
    def from_tsv(cls, path: str | Path) -> "BackstoryTable":
        rows: list[tuple[re.Pattern, str]] = []
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) < 2:
                raise ConfigurationError(f"{path}:{lineno}: expected pattern<TAB>answer")
            pattern, answer = fields[0], fields[1]
            lowered = answer.lower()
            for phrase in PERSONA_DENY_LEXICON:
                if phrase in lowered:
                    raise ConfigurationError(
                        f"{path}:{lineno}: answer claims a human experience ({phrase!r})"
                    )
            try:
                compiled = re.compile(pattern)
            except re.error as exc:
                raise ConfigurationError(f"{path}:{lineno}: bad pattern {pattern!r}: {exc}") from exc
            rows.append((compiled, answer))
        return cls(rows)


def backstory_match(utterance: str, table: BackstoryTable) -> Optional[str]:
    """First matching row wins, so the persona answers consistently."""
    for pattern, answer in table.rows:
        if pattern.search(utterance):
            return answer
    return None
