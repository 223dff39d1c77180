"""Training loop: SGD, plateau-latched learning-rate decay, checkpoints.

The learning rate starts at 1 and is halved at every epoch once dev
perplexity has failed to improve at least once (the decay latches on).
One checkpoint is written per epoch; the checkpoint whose greedy dev
decode scores the best BLEU (as judged by the external `srp evaluate`
command) is copied to best.pt.
"""

from __future__ import annotations

import json
import math
import os
import random
import shutil
import subprocess
import sys
import tempfile
from dataclasses import asdict, dataclass

import torch

from srp_neural import beam, data
from srp_neural.model import ModelConfig, Seq2SeqRealizer

DEFAULT_EVALUATE_COMMAND = (sys.executable, "-m", "srp.cli")


@dataclass
class LRSchedule:
    """Halve once perplexity stops improving, then keep halving each epoch."""

    lr: float
    decay: float = 0.5
    best: float = math.inf
    latched: bool = False

    def step(self, dev_ppl: float) -> float:
        if dev_ppl >= self.best:
            self.latched = True
        self.best = min(self.best, dev_ppl)
        if self.latched:
            self.lr *= self.decay
        return self.lr


def external_bleu(
    hyps: list[list[str]],
    refs: list[list[str]],
    command: tuple[str, ...] = DEFAULT_EVALUATE_COMMAND,
) -> float:
    """Score with the external evaluate CLI; the cross-package boundary."""
    with tempfile.TemporaryDirectory() as tmp:
        hyp_path = os.path.join(tmp, "hyp.txt")
        ref_path = os.path.join(tmp, "ref.txt")
        for path, corpus in ((hyp_path, hyps), (ref_path, refs)):
            with open(path, "w", encoding="utf-8") as handle:
                handle.write("\n".join(" ".join(sent) for sent in corpus) + "\n")
        result = subprocess.run(
            [*command, "evaluate", hyp_path, ref_path, "--json"],
            capture_output=True,
            text=True,
            check=True,
        )
    return float(json.loads(result.stdout)["bleu"])


def perplexity(model: Seq2SeqRealizer, batches_iter) -> float:
    model.eval()
    nll_total = 0.0
    tokens_total = 0.0
    with torch.no_grad():
        for batch in batches_iter:
            _, nll, tokens, _ = model.loss(batch)
            nll_total += float(nll)
            tokens_total += float(tokens)
    return math.exp(nll_total / max(tokens_total, 1.0))


@dataclass
class EpochStats:
    epoch: int
    train_loss: float
    dev_ppl: float
    dev_bleu: float
    lr: float
    checkpoint: str


def save_checkpoint(path: str, model: Seq2SeqRealizer, vocab: data.TargetVocab,
                    config: ModelConfig) -> None:
    torch.save(
        {
            "model": model.state_dict(),
            "target_symbols": list(vocab.symbols),
            "config": asdict(config),
        },
        path,
    )


def load_checkpoint(path: str, schema: data.Schema):
    payload = torch.load(path, weights_only=False)
    config = ModelConfig(**payload["config"])
    symbols = tuple(payload["target_symbols"])
    vocab = data.TargetVocab(symbols, {s: i for i, s in enumerate(symbols)})
    model = Seq2SeqRealizer(schema, len(vocab), config)
    model.load_state_dict(payload["model"])
    model.eval()
    return model, vocab, config


def train(
    train_src: str,
    train_tgt: str,
    dev_src: str,
    dev_tgt: str,
    schema_path: str,
    out_dir: str,
    config: ModelConfig | None = None,
    evaluate_command: tuple[str, ...] = DEFAULT_EVALUATE_COMMAND,
    log=print,
) -> list[EpochStats]:
    config = config or ModelConfig()
    os.makedirs(out_dir, exist_ok=True)
    torch.manual_seed(config.seed)
    schema = data.load_schema(schema_path)
    sources = data.read_source_file(train_src, schema)
    targets = data.read_target_file(train_tgt)
    if len(sources) != len(targets):
        raise ValueError(f"{len(sources)} train sources vs {len(targets)} targets")
    dev_sources = data.read_source_file(dev_src, schema)
    dev_targets = data.read_target_file(dev_tgt)
    vocab = data.TargetVocab.from_sentences(targets, config.target_vocab_size)

    model = Seq2SeqRealizer(schema, len(vocab), config)
    optimizer = torch.optim.SGD(model.parameters(), lr=config.lr)
    schedule = LRSchedule(lr=config.lr, decay=config.lr_decay)
    rng = random.Random(config.seed)
    history: list[EpochStats] = []

    for epoch in range(1, config.epochs + 1):
        model.train()
        order = list(range(len(sources)))
        rng.shuffle(order)
        loss_total = 0.0
        steps = 0
        for batch in data.batches(sources, targets, vocab, config.batch_size, order):
            optimizer.zero_grad()
            objective, _, _, _ = model.loss(batch)
            objective.backward()
            torch.nn.utils.clip_grad_norm_(model.parameters(), config.grad_clip)
            optimizer.step()
            loss_total += float(objective.detach())
            steps += 1
        train_loss = loss_total / max(steps, 1)

        dev_ppl = perplexity(
            model, data.batches(dev_sources, dev_targets, vocab, config.batch_size)
        )
        dev_hyps = [
            beam.greedy_decode(model, source, vocab).tokens for source in dev_sources
        ]
        dev_bleu = external_bleu(dev_hyps, dev_targets, evaluate_command)

        checkpoint = os.path.join(out_dir, f"epoch{epoch:02d}.pt")
        save_checkpoint(checkpoint, model, vocab, config)

        new_lr = schedule.step(dev_ppl)
        for group in optimizer.param_groups:
            group["lr"] = new_lr

        stats = EpochStats(epoch, train_loss, dev_ppl, dev_bleu, new_lr, checkpoint)
        history.append(stats)
        log(
            f"epoch {epoch:02d} loss {train_loss:.4f} dev-ppl {dev_ppl:.3f} "
            f"dev-bleu {dev_bleu:.2f} lr {new_lr:g}"
        )

    best = max(history, key=lambda s: s.dev_bleu)
    shutil.copyfile(best.checkpoint, os.path.join(out_dir, "best.pt"))
    with open(os.path.join(out_dir, "history.json"), "w", encoding="utf-8") as handle:
        json.dump([asdict(s) for s in history], handle, indent=2)
        handle.write("\n")
    return history
