"""Command line interface.

Subcommands: serve, repl, replay, validate-pack, train-da, train-el,
eval-el. Secrets are never taken from flags; no environment variables
are required by default.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import EngineConfig
from .types import ConfigurationError


def _engine_config(args: argparse.Namespace) -> EngineConfig:
    config = EngineConfig.from_yaml(args.config) if args.config else EngineConfig()
    if getattr(args, "pack_dir", None):
        config.pack_dir = Path(args.pack_dir)
    if getattr(args, "state_dir", None):
        config.state_dir = Path(args.state_dir)
    if getattr(args, "seed", None) is not None:
        config.seed = args.seed
    if getattr(args, "host", None):
        config.host = args.host
    if getattr(args, "port", None):
        config.port = args.port
    if getattr(args, "el_path", None):
        config.el_path = args.el_path
    return config


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="engine config YAML")
    parser.add_argument("--pack-dir", help="content pack directory")
    parser.add_argument("--seed", type=int, help="engine seed")


def cmd_serve(args: argparse.Namespace) -> int:
    from .engine import Engine
    from .service import serve

    config = _engine_config(args)
    engine = Engine(config)
    static = Path(args.static_dir) if args.static_dir else None
    print(f"serving on http://{config.host}:{config.port}")
    serve(engine, config.host, config.port, static_dir=static)
    return 0


def cmd_repl(args: argparse.Namespace) -> int:
    from .repl import repl

    repl(_engine_config(args), show_trace=args.trace)
    return 0


def cmd_replay(args: argparse.Namespace) -> int:
    from .engine import Engine
    from .replay import run_replay

    engine = Engine(_engine_config(args))
    report = run_replay(args.script, engine)
    for line in report.transcript:
        print(line)
    print()
    for line in report.lines:
        print(line)
    print(f"\n{report.passed} passed, {report.failed} failed")
    return 0 if report.ok else 1


def cmd_validate_pack(args: argparse.Namespace) -> int:
    from .engine import Engine

    config = _engine_config(args)
    try:
        engine = Engine(config)
    except ConfigurationError as exc:
        print(f"INVALID: {exc}")
        return 1
    rgs = [e.rg.rg_id for e in engine.registry.entries]
    print(f"pack {engine.pack_meta['name']} v{engine.pack_meta['version']} ok")
    print(f"topics: {len(engine.topic_registry.topics)}")
    print(f"RGs: {', '.join(rgs)}")
    return 0


def cmd_train_da(args: argparse.Namespace) -> int:
    from .da.ngram import train_ngram, training_accuracy
    from .engine import Engine

    config = _engine_config(args)
    engine = Engine(config)
    model = train_ngram(engine.da_corpus, epochs=args.epochs, seed=config.seed)
    model.save(args.out)
    accuracy = training_accuracy(engine.da_corpus, model)
    print(f"trained on {len(engine.da_corpus)} examples; training accuracy {accuracy:.3f}")
    print(f"saved to {args.out}")
    return 0


def cmd_train_el(args: argparse.Namespace) -> int:
    from .el.bio import bio_train, sequence_accuracy, token_features
    from .engine import Engine, load_bio_corpus

    config = _engine_config(args)
    engine = Engine(config)
    sentences = load_bio_corpus(config.require_pack_file("el/bio_train.txt"))
    annotated = []
    for tokens, tags in sentences:
        flags = engine.linker.gazetteer_flags(tokens)
        feats = [token_features(tokens, i, gazetteer_types=flags[i]) for i in range(len(tokens))]
        annotated.append((feats, tags))
    weights = bio_train(annotated, epochs=args.epochs, seed=config.seed)
    weights.save(args.out)
    accuracy = sequence_accuracy(annotated, weights)
    print(f"trained on {len(annotated)} sentences; sequence accuracy {accuracy:.3f}")
    print(f"saved to {args.out}")
    return 0


def cmd_eval_el(args: argparse.Namespace) -> int:
    from .el.evaluate import evaluate_linking
    from .engine import Engine
    from .nlu.nounphrase import noun_phrase_spans

    config = _engine_config(args)
    if args.el_path:
        config.el_path = args.el_path
    engine = Engine(config)
    corpus_path = Path(args.corpus) if args.corpus else config.require_pack_file("el/desk_corpus.tsv")

    gold: list[set[tuple[str, str]]] = []
    predicted = []
    for line in corpus_path.read_text(encoding="utf-8").splitlines():
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        text = fields[0]
        golds = set()
        if len(fields) > 1 and fields[1]:
            for pair in fields[1].split(","):
                uri, _, etype = pair.partition(":")
                golds.add((uri, etype))
        gold.append(golds)
        predicted.append(engine.linker.link(text, noun_phrase_spans(text)))
    scores = evaluate_linking(gold, predicted)
    for category, s in scores.items():
        print(
            f"{category:12s} P={s.precision:.3f} R={s.recall:.3f} F1={s.f1:.3f} "
            f"(tp={s.true_positives} pred={s.predicted} gold={s.gold})"
        )
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="parley", description="contract-based dialogue engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the HTTP turn service")
    _add_common(p)
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--state-dir")
    p.add_argument("--static-dir", help="directory of built web UI to serve at /")
    p.add_argument("--el-path", choices=["ensemble", "trained"])
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("repl", help="interactive terminal conversation")
    _add_common(p)
    p.add_argument("--trace", action="store_true", help="print the TurnTrace per turn")
    p.set_defaults(fn=cmd_repl)

    p = sub.add_parser("replay", help="run a scripted conversation with assertions")
    _add_common(p)
    p.add_argument("script", help="replay script YAML")
    p.set_defaults(fn=cmd_replay)

    p = sub.add_parser("validate-pack", help="load and validate a content pack")
    _add_common(p)
    p.set_defaults(fn=cmd_validate_pack)

    p = sub.add_parser("train-da", help="train the n-gram DA model from the pack corpus")
    _add_common(p)
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--out", default="da_model.json")
    p.set_defaults(fn=cmd_train_da)

    p = sub.add_parser("train-el", help="train the BIO mention tagger from the pack corpus")
    _add_common(p)
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--out", default="bio_weights.json")
    p.set_defaults(fn=cmd_train_el)

    p = sub.add_parser("eval-el", help="precision/recall/F1 on an annotated corpus")
    _add_common(p)
    p.add_argument("--corpus", help="TSV: utterance<TAB>uri:Type,uri:Type")
    p.add_argument("--el-path", choices=["ensemble", "trained"])
    p.set_defaults(fn=cmd_eval_el)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
