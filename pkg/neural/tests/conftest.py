import time

import pytest

from corpusgen import corpus_text
from primary_cli import run_primary


@pytest.fixture(scope="session")
def exported(tmp_path_factory) -> dict:
    """Factored training files produced end to end by the primary CLI."""
    work = tmp_path_factory.mktemp("exported")
    gold = work / "gold.conllu"
    dev_gold = work / "dev.conllu"
    gold.write_text(corpus_text(500, seed=31), encoding="utf-8")
    dev_gold.write_text(corpus_text(50, seed=97), encoding="utf-8")

    run_primary("build-map", str(gold), "-o", str(work / "map.tsv"))
    run_primary("pairs", str(gold), "--seed", "5", "-o", str(work / "train"))
    run_primary("pairs", str(dev_gold), "--seed", "6", "-o", str(work / "dev"))
    run_primary(
        "export", str(work / "train"),
        "--map", str(work / "map.tsv"),
        "--schema-out", str(work / "schema.json"),
    )
    run_primary(
        "export", str(work / "dev"),
        "--map", str(work / "map.tsv"),
        "--schema-out", str(work / "dev-schema.json"),
    )
    return {
        "dir": work,
        "schema": work / "schema.json",
        "train_src": work / "train.factored.src.txt",
        "train_tgt": work / "train.factored.tgt.txt",
        "dev_src": work / "dev.factored.src.txt",
        "dev_tgt": work / "dev.factored.tgt.txt",
    }


@pytest.fixture(scope="session")
def trained(exported, tmp_path_factory):
    """Model trained to overfit the 500-sentence toy corpus (session-wide)."""
    from srp_neural import train as training
    from srp_neural.model import ModelConfig

    out_dir = tmp_path_factory.mktemp("checkpoints")
    config = ModelConfig(epochs=20, batch_size=25, seed=7)
    start = time.perf_counter()
    history = training.train(
        str(exported["train_src"]),
        str(exported["train_tgt"]),
        str(exported["dev_src"]),
        str(exported["dev_tgt"]),
        str(exported["schema"]),
        str(out_dir),
        config,
    )
    seconds = time.perf_counter() - start
    return {
        "out_dir": out_dir,
        "history": history,
        "config": config,
        "train_seconds": seconds,
        **exported,
    }
