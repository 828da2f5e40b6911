"""Conversation replay and assertion harness.

A script lists user turns with optional per-turn expectations (action,
topic, rg, substrings) and optional global expectations (distinct RG
count within a window on one topic, three-part response structure).
The report prints one pass/fail line per assertion; failures make the
CLI exit non-zero. Transcripts are deterministic for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .engine import Engine
from .types import ConfigurationError


@dataclass
class ReplayReport:
    lines: list[str] = field(default_factory=list)
    passed: int = 0
    failed: int = 0
    transcript: list[str] = field(default_factory=list)
    traces: list[dict] = field(default_factory=list)

    def check(self, ok: bool, label: str) -> None:
        if ok:
            self.passed += 1
            self.lines.append(f"PASS {label}")
        else:
            self.failed += 1
            self.lines.append(f"FAIL {label}")

    @property
    def ok(self) -> bool:
        return self.failed == 0


def run_replay(script_path: str | Path, engine: Engine) -> ReplayReport:
    try:
        doc = yaml.safe_load(Path(script_path).read_text(encoding="utf-8")) or {}
    except FileNotFoundError as exc:
        raise ConfigurationError(f"replay script not found: {script_path}") from exc
    report = ReplayReport()
    conversation_id = doc.get("conversation_id", f"replay-{Path(script_path).stem}")
    engine.reset_conversation(conversation_id)

    turns = doc.get("turns", [])
    for i, raw in enumerate(turns):
        user_text = raw.get("user", "")
        response, trace = engine.take_turn(conversation_id, user_text)
        report.traces.append(trace.to_dict())
        report.transcript.append(
            f"[{i}] action={trace.action.value} topic={trace.topic} "
            f"rg={trace.chosen_rg} | {response.final_text}"
        )
        expect = raw.get("expect") or {}
        if "action" in expect:
            report.check(trace.action.value == expect["action"], f"turn {i}: action={expect['action']}")
        if "topic" in expect:
            report.check(trace.topic == expect["topic"], f"turn {i}: topic={expect['topic']}")
        if "rg" in expect:
            report.check(trace.chosen_rg == expect["rg"], f"turn {i}: rg={expect['rg']}")
        if "rg_in" in expect:
            report.check(
                trace.chosen_rg in expect["rg_in"], f"turn {i}: rg in {expect['rg_in']}"
            )
        if "contains" in expect:
            needle = expect["contains"].lower()
            report.check(
                needle in response.final_text.lower(), f"turn {i}: contains {expect['contains']!r}"
            )

    global_expect = doc.get("expect_global") or {}
    if global_expect:
        within = int(global_expect.get("within_turns", len(turns)))
        topic = global_expect.get("topic")
        window = report.traces[:within]
        if topic is not None:
            window = [t for t in window if t["topic"] == topic]
        if "min_distinct_rgs" in global_expect:
            distinct = {t["chosen_rg"] for t in window}
            want = int(global_expect["min_distinct_rgs"])
            report.check(
                len(distinct) >= want,
                f"global: >= {want} distinct RGs (got {len(distinct)}: {sorted(distinct)})",
            )
        if global_expect.get("three_part_structure"):
            structured = all(
                t["response_parts"].get("body") for t in report.traces
            )
            report.check(structured, "global: three-part structure on every turn")
    return report
