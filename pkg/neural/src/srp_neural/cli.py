"""Train/decode commands for the toy neural realizer."""

from __future__ import annotations

import argparse
import sys

from srp_neural import beam, data, train as training
from srp_neural.model import ModelConfig


def cmd_train(args) -> int:
    config = ModelConfig(
        epochs=args.epochs,
        batch_size=args.batch_size,
        seed=args.seed,
        hidden=args.hidden,
        beam_size=args.beam_size,
    )
    training.train(
        args.train_src,
        args.train_tgt,
        args.dev_src,
        args.dev_tgt,
        args.schema,
        args.out_dir,
        config,
    )
    return 0


def cmd_decode(args) -> int:
    schema = data.load_schema(args.schema)
    model, vocab, config = training.load_checkpoint(args.checkpoint, schema)
    sources = data.read_source_file(args.source, schema)
    beam_size = args.beam_size or config.beam_size
    hyps = beam.decode_corpus(model, sources, vocab, beam_size=beam_size)
    text = "\n".join(" ".join(sent) for sent in hyps) + ("\n" if hyps else "")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="srp-neural")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train")
    p.add_argument("--train-src", required=True)
    p.add_argument("--train-tgt", required=True)
    p.add_argument("--dev-src", required=True)
    p.add_argument("--dev-tgt", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--hidden", type=int, default=450)
    p.add_argument("--beam-size", type=int, default=5)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("decode")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--beam-size", type=int, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_decode)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"srp-neural: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
