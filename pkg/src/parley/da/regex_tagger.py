"""Phrase-matching dialogue-act tagger.

Works well for acts with conventional phrasings (topic navigation,
closings); the n-gram model covers the long tail. Patterns live in a
TSV pack file: regex, label, priority.
"""

from __future__ import annotations

import re
from pathlib import Path

from ..types import ConfigurationError, DALabel


class RegexTagger:
    def __init__(self, patterns: list[tuple[re.Pattern, DALabel, int]]) -> None:
        # lower priority value fires first
        self.patterns = sorted(patterns, key=lambda p: p[2])

    @classmethod
    def from_tsv(cls, path: str | Path) -> "RegexTagger":
        patterns: list[tuple[re.Pattern, DALabel, int]] = []
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) < 2:
                raise ConfigurationError(f"{path}:{lineno}: expected regex<TAB>label[<TAB>priority]")
            raw, label = fields[0], fields[1]
            priority = int(fields[2]) if len(fields) > 2 and fields[2] else 100
            try:
                compiled = re.compile(raw)
            except re.error as exc:
                raise ConfigurationError(f"{path}:{lineno}: bad pattern {raw!r}: {exc}") from exc
            patterns.append((compiled, DALabel.parse(label), priority))
        return cls(patterns)

    def tag(self, segment_text: str) -> list[tuple[DALabel, float]]:
        """All pattern hits in priority order, each with confidence 1.0."""
        hits: list[tuple[DALabel, float]] = []
        seen: set[DALabel] = set()
        for pattern, label, _prio in self.patterns:
            if label in seen:
                continue
            if pattern.search(segment_text):
                hits.append((label, 1.0))
                seen.add(label)
        return hits
