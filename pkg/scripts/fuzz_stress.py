#!/usr/bin/env python3
"""Stress the full turn pipeline with fuzzed input and report contract
soundness, latency percentiles and RG attribution counts."""

import argparse
import random
import time
from collections import Counter

from parley.config import EngineConfig
from parley.engine import Engine

WORDS = (
    "i you like love hate the a movies sports music taylor swift kobe bryant "
    "spider man hello yes no what why tell me about think really so and or "
    "let's talk basketball harry potter book news robot weather zzz qq"
).split()


def fuzz(rng: random.Random) -> str:
    roll = rng.random()
    if roll < 0.05:
        return ""
    if roll < 0.10:
        return "".join(chr(rng.randint(33, 0x2FF)) for _ in range(rng.randint(1, 30)))
    return " ".join(rng.choice(WORDS) for _ in range(rng.randint(1, 14)))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--turns", type=int, default=2000)
    parser.add_argument("--conversations", type=int, default=40)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    engine = Engine(EngineConfig(seed=args.seed))
    rng = random.Random(args.seed)
    latencies = []
    rg_counts: Counter = Counter()
    unsound = 0
    unanswered = 0
    for i in range(args.turns):
        cid = f"stress-{i % args.conversations}"
        text = fuzz(rng)
        started = time.perf_counter()
        response, trace = engine.take_turn(cid, text)
        latencies.append((time.perf_counter() - started) * 1000)
        rg_counts[trace.chosen_rg] += 1
        if not response.final_text.strip():
            unanswered += 1
        if not trace.used_fallback and not engine.registry.is_sound(
            trace.chosen_rg, trace.action, trace.topic
        ):
            unsound += 1

    latencies.sort()
    p50 = latencies[len(latencies) // 2]
    p95 = latencies[int(len(latencies) * 0.95) - 1]
    p99 = latencies[int(len(latencies) * 0.99) - 1]
    print(f"{args.turns} turns over {args.conversations} conversations")
    print(f"latency ms: p50={p50:.1f} p95={p95:.1f} p99={p99:.1f} max={latencies[-1]:.1f}")
    print(f"unsound selections: {unsound}, unanswered turns: {unanswered}")
    print("attribution:")
    for rg, count in rg_counts.most_common():
        print(f"  {rg:24s} {count}")
    return 0 if unsound == 0 and unanswered == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
