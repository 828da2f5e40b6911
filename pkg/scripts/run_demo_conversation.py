#!/usr/bin/env python3
"""Run the bundled replay scripts and print full transcripts with per-turn
traces. Quick way to eyeball the engine's interleaving behavior."""

import argparse

from parley.config import DEFAULT_PACK_DIR, EngineConfig
from parley.engine import Engine
from parley.replay import run_replay


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument(
        "--script",
        choices=["superhero", "harry_potter", "convo_kg", "all"],
        default="all",
    )
    args = parser.parse_args()

    engine = Engine(EngineConfig(seed=args.seed))
    names = ["superhero", "harry_potter", "convo_kg"] if args.script == "all" else [args.script]
    failures = 0
    for name in names:
        print(f"\n=== {name} (seed {args.seed}) ===")
        report = run_replay(DEFAULT_PACK_DIR / "replays" / f"{name}.yaml", engine)
        for line in report.transcript:
            print(line)
        print()
        for line in report.lines:
            print(" ", line)
        failures += report.failed
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
