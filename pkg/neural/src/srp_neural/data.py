"""Reading the factored export format (schema JSON + parallel text files).

The schema JSON lists per-factor vocab files (one symbol per line, the
four reserved specials first) and the on-file field order; source tokens
are factor strings joined by the schema separator. This module maps them
to index tensors without importing the producing package.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import torch

SPECIALS = ("<unk>", "<pad>", "<s>", "</s>")
UNK, PAD, BOS, EOS = 0, 1, 2, 3


@dataclass(frozen=True)
class Factor:
    name: str
    symbols: tuple[str, ...]
    index: dict[str, int]
    embedding_size: int

    def index_of(self, symbol: str) -> int:
        return self.index.get(symbol, UNK)

    def __len__(self) -> int:
        return len(self.symbols)


@dataclass(frozen=True)
class Schema:
    factors: tuple[Factor, ...]
    field_order: tuple[str, ...]
    separator: str
    position_cap: int

    @property
    def total_dim(self) -> int:
        return sum(f.embedding_size for f in self.factors)


def load_schema(path: str) -> Schema:
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    directory = os.path.dirname(os.path.abspath(path))
    factors = []
    for entry in payload["factors"]:
        with open(os.path.join(directory, entry["vocab_file"]), encoding="utf-8") as handle:
            symbols = tuple(handle.read().splitlines())
        if symbols[:4] != SPECIALS:
            raise ValueError(f"vocab for {entry['name']} does not start with the specials")
        factors.append(
            Factor(
                name=entry["name"],
                symbols=symbols,
                index={s: i for i, s in enumerate(symbols)},
                embedding_size=entry["embedding_size"],
            )
        )
    return Schema(
        factors=tuple(factors),
        field_order=tuple(payload["field_order"]),
        separator=payload["separator"],
        position_cap=payload["position_cap"],
    )


@dataclass(frozen=True)
class TargetVocab:
    symbols: tuple[str, ...]
    index: dict[str, int]

    @classmethod
    def from_sentences(cls, sentences: list[list[str]], max_size: int = 30000) -> "TargetVocab":
        counts: dict[str, int] = {}
        for sent in sentences:
            for tok in sent:
                counts[tok] = counts.get(tok, 0) + 1
        ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        content = [s for s, _ in ranked if s not in SPECIALS][:max_size]
        symbols = SPECIALS + tuple(content)
        return cls(symbols, {s: i for i, s in enumerate(symbols)})

    def index_of(self, symbol: str) -> int:
        return self.index.get(symbol, UNK)

    def __len__(self) -> int:
        return len(self.symbols)


@dataclass(frozen=True)
class SourceSentence:
    """Factor index matrix (length x factors) plus the raw surface fields."""

    indices: torch.Tensor
    surfaces: tuple[str, ...]  # field 0 of each token; the copy source for unknowns


def parse_source_line(line: str, schema: Schema) -> SourceSentence:
    words = line.split(" ")
    rows = []
    surfaces = []
    for word in words:
        fields = word.split(schema.separator)
        if len(fields) != len(schema.field_order):
            raise ValueError(
                f"expected {len(schema.field_order)} factors, got {len(fields)}: {word!r}"
            )
        by_name = dict(zip(schema.field_order, fields))
        rows.append([factor.index_of(by_name[factor.name]) for factor in schema.factors])
        surfaces.append(fields[0])
    return SourceSentence(torch.tensor(rows, dtype=torch.long), tuple(surfaces))


def read_source_file(path: str, schema: Schema) -> list[SourceSentence]:
    with open(path, encoding="utf-8") as handle:
        return [parse_source_line(line, schema) for line in handle.read().splitlines() if line]


def read_target_file(path: str) -> list[list[str]]:
    with open(path, encoding="utf-8") as handle:
        return [line.split() for line in handle.read().splitlines()]


@dataclass
class Batch:
    src: torch.Tensor        # (B, S, F) long
    src_lengths: torch.Tensor  # (B,)
    src_mask: torch.Tensor   # (B, S) bool, True at real tokens
    tgt_in: torch.Tensor     # (B, T) long, starts with BOS
    tgt_out: torch.Tensor    # (B, T) long, ends with EOS
    tgt_mask: torch.Tensor   # (B, T) bool


def make_batch(
    sources: list[SourceSentence], targets: list[list[str]], vocab: TargetVocab
) -> Batch:
    batch = len(sources)
    n_factors = sources[0].indices.shape[1]
    max_s = max(s.indices.shape[0] for s in sources)
    max_t = max(len(t) for t in targets) + 1  # BOS/EOS shift adds one step
    src = torch.full((batch, max_s, n_factors), PAD, dtype=torch.long)
    src_mask = torch.zeros(batch, max_s, dtype=torch.bool)
    lengths = torch.zeros(batch, dtype=torch.long)
    tgt_in = torch.full((batch, max_t), PAD, dtype=torch.long)
    tgt_out = torch.full((batch, max_t), PAD, dtype=torch.long)
    tgt_mask = torch.zeros(batch, max_t, dtype=torch.bool)
    for i, (source, target) in enumerate(zip(sources, targets)):
        s = source.indices.shape[0]
        src[i, :s] = source.indices
        src_mask[i, :s] = True
        lengths[i] = s
        ids = [vocab.index_of(tok) for tok in target]
        tgt_in[i, : len(ids) + 1] = torch.tensor([BOS] + ids, dtype=torch.long)
        tgt_out[i, : len(ids) + 1] = torch.tensor(ids + [EOS], dtype=torch.long)
        tgt_mask[i, : len(ids) + 1] = True
    return Batch(src, lengths, src_mask, tgt_in, tgt_out, tgt_mask)


def batches(
    sources: list[SourceSentence],
    targets: list[list[str]],
    vocab: TargetVocab,
    batch_size: int,
    order: list[int] | None = None,
):
    if len(sources) != len(targets):
        raise ValueError(f"{len(sources)} source lines vs {len(targets)} target lines")
    indices = order if order is not None else list(range(len(sources)))
    for start in range(0, len(indices), batch_size):
        chunk = indices[start : start + batch_size]
        yield make_batch([sources[i] for i in chunk], [targets[i] for i in chunk], vocab)
