"""Red-question detection: profanity, sensitive and controversial input.

Backed by a single lookup table of patterns. Substring rows carry a key
into the red-response template pack so those inputs get a specific,
detailed reply; unigram rows only categorize.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..text import tokenize
from ..types import ConfigurationError, RedCategory, RedCategoryKind, UtteranceSegment


@dataclass(frozen=True)
class RedRule:
    pattern: str
    match_type: str  # unigram | substring
    category: RedCategoryKind
    response_key: Optional[str]


class RedTable:
    def __init__(self, rules: list[RedRule]) -> None:
        self.substring_rules = [r for r in rules if r.match_type == "substring"]
        self.unigram_rules = {r.pattern: r for r in rules if r.match_type == "unigram"}

    @classmethod
    def from_tsv(cls, path: str | Path) -> "RedTable":
        rules: list[RedRule] = []
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) < 3:
                raise ConfigurationError(f"{path}:{lineno}: expected pattern<TAB>type<TAB>category")
            pattern, match_type, category = fields[0], fields[1], fields[2]
            if match_type not in ("unigram", "substring"):
                raise ConfigurationError(f"{path}:{lineno}: unknown match type {match_type!r}")
            key = fields[3] if len(fields) > 3 and fields[3] else None
            rules.append(
                RedRule(
                    pattern=pattern.lower(),
                    match_type=match_type,
                    category=RedCategoryKind(category),
                    response_key=key,
                )
            )
        return cls(rules)

    def profanity_unigrams(self) -> set[str]:
        return {
            p for p, r in self.unigram_rules.items()
            if r.category == RedCategoryKind.PROFANITY
        }


def detect_red(segments: list[UtteranceSegment], table: RedTable) -> Optional[RedCategory]:
    """Substring rules win over unigram rules: they are more specific and
    carry a dedicated response key."""
    normalized = " ".join(seg.text for seg in segments if seg.text)
    for rule in table.substring_rules:
        if rule.pattern in normalized:
            return RedCategory(
                category=rule.category,
                matched_pattern=rule.pattern,
                specific_response_key=rule.response_key,
            )
    for token in tokenize(normalized):
        rule = table.unigram_rules.get(token)
        if rule is not None:
            return RedCategory(category=rule.category, matched_pattern=rule.pattern)
    return None
