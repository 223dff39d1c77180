"""Command-line entry point wiring the pipeline end to end.

All randomness flows from ``--seed``; per-instance seeds are drawn from a
single generator so runs are reproducible. Diagnostics go to stderr; data
goes to stdout or ``-o`` files. Config defaults can be overridden with
``SRP_``-prefixed environment variables (SRP_SEED, SRP_OVERLAP_THRESHOLD,
SRP_VOCAB_SIZE, SRP_LEMMA_EMBEDDING, SRP_SEPARATOR, SRP_POSITION_CAP).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass

from srp import augment, delemma, deptree, factored, metrics, realizer
from srp.augment import TrainingPair
from srp.conllu import (
    FormatError,
    check_instance,
    iter_blocks,
    load_corpus,
    parse_instance,
    save_corpus,
    serialize_corpus,
)

_SEED_RANGE = 2**32


@dataclass
class Config:
    seed: int = 0
    overlap_threshold: float = 0.95
    vocab_size: int = 30000
    lemma_embedding: int = 300
    separator: str = factored.DEFAULT_SEPARATOR
    position_cap: int = factored.DEFAULT_POSITION_CAP

    def __post_init__(self) -> None:
        if not 0.0 <= self.overlap_threshold <= 1.0:
            raise ValueError("overlap threshold must be within [0, 1]")
        for name in ("vocab_size", "lemma_embedding", "position_cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")

    @classmethod
    def from_env(cls, environ=os.environ) -> "Config":
        fields = {
            "SRP_SEED": ("seed", int),
            "SRP_OVERLAP_THRESHOLD": ("overlap_threshold", float),
            "SRP_VOCAB_SIZE": ("vocab_size", int),
            "SRP_LEMMA_EMBEDDING": ("lemma_embedding", int),
            "SRP_SEPARATOR": ("separator", str),
            "SRP_POSITION_CAP": ("position_cap", int),
        }
        overrides = {}
        for var, (name, cast) in fields.items():
            if var in environ:
                try:
                    overrides[name] = cast(environ[var])
                except ValueError as exc:
                    raise ValueError(f"bad value for {var}: {environ[var]!r}") from exc
        return cls(**overrides)


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as handle:
        return handle.read().splitlines()


def _instance_seeds(seed: int, count: int) -> list[int]:
    rng = random.Random(seed)
    return [rng.randrange(_SEED_RANGE) for _ in range(count)]


def cmd_validate(args) -> int:
    with open(args.corpus, encoding="utf-8") as handle:
        blocks = iter_blocks(handle.read())
    failures = 0
    for i, block in enumerate(blocks):
        try:
            inst = parse_instance(block, validate=False)
            report = check_instance(inst)
            violations = [[v.rule, v.position, v.message] for v in report.violations]
        except FormatError as exc:
            violations = [["parse", 0, str(exc)]]
        ok = not violations
        failures += 0 if ok else 1
        print(json.dumps({"instance": i, "ok": ok, "violations": violations}))
    if failures:
        print(f"{failures} of {len(blocks)} instances invalid", file=sys.stderr)
        return 1
    return 0


def cmd_shuffle(args) -> int:
    corpus = load_corpus(args.corpus)
    seeds = _instance_seeds(args.seed, len(corpus))
    shuffled = [deptree.shuffle(inst, s) for inst, s in zip(corpus, seeds)]
    _emit(serialize_corpus(shuffled), args.output)
    return 0


def cmd_build_map(args) -> int:
    dmap = delemma.build_map(load_corpus(args.corpus))
    _emit(delemma.dumps_map(dmap), args.output)
    return 0


def cmd_coverage(args) -> int:
    dmap = delemma.load_map(args.map)
    value = delemma.coverage(dmap, load_corpus(args.corpus))
    print(f"{value:.6f}")
    return 0


def cmd_filter(args) -> int:
    corpus = load_corpus(args.corpus)
    vocab = augment.full_lemma_vocab(load_corpus(args.vocab_from))
    kept, stats = augment.filter_corpus(corpus, vocab, args.threshold)
    _emit(serialize_corpus(kept), args.output)
    stats_json = json.dumps(
        {"total": stats.total, "kept": stats.kept, "threshold": stats.threshold},
        sort_keys=True,
    )
    if args.stats_out:
        with open(args.stats_out, "w", encoding="utf-8") as handle:
            handle.write(stats_json + "\n")
    else:
        print(stats_json, file=sys.stderr)
    return 0


def cmd_pairs(args) -> int:
    corpus = load_corpus(args.corpus)
    seeds = _instance_seeds(args.seed, len(corpus))
    pairs = []
    for i, (inst, seed) in enumerate(zip(corpus, seeds)):
        try:
            pairs.append(augment.make_training_pair(inst, seed))
        except FormatError as exc:
            raise FormatError(f"instance {i}: {exc}") from exc
    save_corpus(args.out_prefix + ".src.conllu", [p.source for p in pairs])
    with open(args.out_prefix + ".tgt.txt", "w", encoding="utf-8") as handle:
        for pair in pairs:
            handle.write(" ".join(pair.target) + "\n")
    return 0


def _load_pairs(prefix: str) -> list[TrainingPair]:
    sources = load_corpus(prefix + ".src.conllu")
    targets = _read_lines(prefix + ".tgt.txt")
    if len(sources) != len(targets):
        raise FormatError(
            f"{len(sources)} source instances vs {len(targets)} target lines under {prefix!r}"
        )
    return [TrainingPair(src, tuple(line.split())) for src, line in zip(sources, targets)]


def cmd_export(args) -> int:
    pairs = _load_pairs(args.pairs_prefix)
    dmap = delemma.load_map(args.map)
    schema = factored.build_schema(
        pairs,
        dmap,
        lemma_vocab_size=args.vocab_size,
        lemma_embedding=args.lemma_embedding,
        position_cap=args.position_cap,
        separator=args.separator,
    )
    src_text, tgt_text = factored.export_factored(pairs, schema, dmap)
    _emit(src_text, args.pairs_prefix + ".factored.src.txt")
    _emit(tgt_text, args.pairs_prefix + ".factored.tgt.txt")
    factored.save_schema(schema, args.schema_out)
    return 0


def cmd_realize(args) -> int:
    corpus = load_corpus(args.corpus)
    dmap = delemma.load_map(args.map)
    precedence = (
        realizer.load_precedence(args.precedence)
        if args.precedence
        else realizer.DEFAULT_PRECEDENCE
    )
    lines = []
    for inst in corpus:
        if args.mode == "identity":
            tokens = realizer.realize_identity(inst, dmap)
        else:
            tokens = realizer.realize_tree(inst, dmap, precedence)
        lines.append(" ".join(tokens))
    _emit("\n".join(lines) + ("\n" if lines else ""), args.output)
    return 0


def cmd_evaluate(args) -> int:
    hyps = [line.split() for line in _read_lines(args.hypotheses)]
    refs = [line.split() for line in _read_lines(args.references)]
    report = metrics.evaluate(hyps, refs)
    report_json = json.dumps(report.to_json_dict(), sort_keys=True, indent=2) + "\n"
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as handle:
            handle.write(report_json)
    if args.json:
        sys.stdout.write(report_json)
    else:
        print(report.format_table())
    return 0


def build_parser(cfg: Config) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srp", description="Surface realization data pipeline and evaluation."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check every instance of a corpus")
    p.add_argument("corpus")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("shuffle", help="shuffle instances into task inputs")
    p.add_argument("corpus")
    p.add_argument("--seed", type=int, default=cfg.seed)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_shuffle)

    p = sub.add_parser("build-map", help="build a (lemma, xpos) -> form map")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_build_map)

    p = sub.add_parser("coverage", help="fraction of gold forms covered by a map")
    p.add_argument("map")
    p.add_argument("corpus")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("filter", help="keep instances with enough vocabulary overlap")
    p.add_argument("corpus")
    p.add_argument("--vocab-from", required=True, dest="vocab_from")
    p.add_argument("--threshold", type=float, default=cfg.overlap_threshold)
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--stats-out", default=None)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("pairs", help="make aligned shuffled/target training files")
    p.add_argument("corpus")
    p.add_argument("--seed", type=int, default=cfg.seed)
    p.add_argument("-o", "--out-prefix", required=True, dest="out_prefix")
    p.set_defaults(func=cmd_pairs)

    p = sub.add_parser("export", help="write factored source/target files and schema")
    p.add_argument("pairs_prefix", help="prefix written by the pairs command")
    p.add_argument("--map", required=True)
    p.add_argument("--schema-out", required=True, dest="schema_out")
    p.add_argument("--vocab-size", type=int, default=cfg.vocab_size)
    p.add_argument("--lemma-embedding", type=int, default=cfg.lemma_embedding)
    p.add_argument("--separator", default=cfg.separator)
    p.add_argument("--position-cap", type=int, default=cfg.position_cap)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("realize", help="realize a corpus with a deterministic baseline")
    p.add_argument("corpus")
    p.add_argument("--map", required=True)
    p.add_argument("--mode", choices=("identity", "tree"), default="tree")
    p.add_argument("--precedence", default=None, help="precedence table JSON")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("evaluate", help="score hypotheses against references")
    p.add_argument("hypotheses")
    p.add_argument("references")
    p.add_argument("--json", action="store_true", help="print the JSON report")
    p.add_argument("--json-out", default=None, dest="json_out")
    p.set_defaults(func=cmd_evaluate)

    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = Config.from_env()
    except ValueError as exc:
        print(f"srp: error: {exc}", file=sys.stderr)
        return 1
    parser = build_parser(cfg)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, ValueError, OSError) as exc:
        print(f"srp: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
