#!/usr/bin/env python3
"""Regenerate the bundled sample corpus (data/sample50.conllu)."""

import argparse
import pathlib

from srp import conllu, synth


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=50)
    parser.add_argument("--seed", type=int, default=2018)
    parser.add_argument(
        "-o",
        "--output",
        default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "sample50.conllu"),
    )
    args = parser.parse_args()
    corpus = synth.template_corpus(args.size, args.seed)
    conllu.save_corpus(args.output, corpus)
    print(f"wrote {len(corpus)} instances to {args.output}")


if __name__ == "__main__":
    main()
