"""Factored input encoding and export to parallel seq2seq text files.

Each token is represented by six factors. Embedding concatenation follows
the factor order lemma, xpos, position, upos, head, deprel; the exported
text format writes fields as lemma, upos, xpos, position, head, deprel
(the order is recorded in the schema JSON, so consumers map by name).
Non-lemma embedding sizes come from the floor(|V|^0.7) heuristic.
"""

from __future__ import annotations

import json
import os
from collections import Counter
from dataclasses import dataclass

import numpy as np

from srp import delemma
from srp.augment import TrainingPair, Vocabulary
from srp.conllu import FormatError, Instance, Token
from srp.delemma import DelemmaMap

FACTOR_ORDER = ("lemma", "xpos", "position", "upos", "head", "deprel")
EXPORT_FIELD_ORDER = ("lemma", "upos", "xpos", "position", "head", "deprel")
DEFAULT_SEPARATOR = "￨"  # U+FFE8, absent from natural text
DEFAULT_POSITION_CAP = 99
DEFAULT_LEMMA_EMBEDDING = 300


def embedding_size_heuristic(vocab_size: int) -> int:
    """floor(vocab_size ** 0.7), minimum 1, computed exactly in integers."""
    if vocab_size < 1:
        raise ValueError("vocab_size must be >= 1")
    target = vocab_size**7
    m = max(1, int(round(vocab_size**0.7)))
    while m**10 > target:
        m -= 1
    while (m + 1) ** 10 <= target:
        m += 1
    return max(1, m)


@dataclass(frozen=True)
class FactorSpec:
    name: str
    vocab: Vocabulary
    embedding_size: int


@dataclass(frozen=True)
class FactorSchema:
    """Per-factor symbol tables and embedding sizes, in FACTOR_ORDER."""

    factors: tuple[FactorSpec, ...]
    position_cap: int = DEFAULT_POSITION_CAP
    separator: str = DEFAULT_SEPARATOR

    @property
    def total_dim(self) -> int:
        return sum(f.embedding_size for f in self.factors)

    def factor(self, name: str) -> FactorSpec:
        for spec in self.factors:
            if spec.name == name:
                return spec
        raise KeyError(name)


@dataclass(frozen=True)
class FactoredToken:
    """One vocabulary index per factor, in schema factor order."""

    indices: tuple[int, ...]


@dataclass(frozen=True)
class EmbeddingSet:
    """Per-factor dense matrices, deterministically seeded."""

    matrices: tuple[np.ndarray, ...]

    @classmethod
    def initialize(cls, schema: FactorSchema, seed: int) -> "EmbeddingSet":
        rng = np.random.default_rng(seed)
        matrices = tuple(
            rng.uniform(-0.1, 0.1, size=(len(spec.vocab), spec.embedding_size))
            for spec in schema.factors
        )
        return cls(matrices)


def schema_from_vocabs(
    vocabs: dict[str, Vocabulary],
    lemma_embedding: int = DEFAULT_LEMMA_EMBEDDING,
    position_cap: int = DEFAULT_POSITION_CAP,
    separator: str = DEFAULT_SEPARATOR,
) -> FactorSchema:
    missing = set(FACTOR_ORDER) - set(vocabs)
    if missing:
        raise ValueError(f"missing factor vocabularies: {sorted(missing)}")
    factors = tuple(
        FactorSpec(
            name,
            vocabs[name],
            lemma_embedding if name == "lemma" else embedding_size_heuristic(len(vocabs[name])),
        )
        for name in FACTOR_ORDER
    )
    return FactorSchema(factors, position_cap=position_cap, separator=separator)


def build_schema(
    pairs: list[TrainingPair],
    dmap: DelemmaMap,
    lemma_vocab_size: int = 30000,
    lemma_embedding: int = DEFAULT_LEMMA_EMBEDDING,
    position_cap: int = DEFAULT_POSITION_CAP,
    separator: str = DEFAULT_SEPARATOR,
) -> FactorSchema:
    """Build factor vocabularies from the appended source sequences of ``pairs``.

    The lemma vocabulary is capped at ``lemma_vocab_size`` most frequent
    values; position and head vocabularies are the fixed range 0..cap.
    """
    counts: dict[str, Counter] = {name: Counter() for name in ("lemma", "xpos", "upos", "deprel")}
    for pair in pairs:
        for tok in delemma.append_forms(pair.source, dmap):
            counts["lemma"][tok.lemma] += 1
            counts["xpos"][tok.xpos] += 1
            counts["upos"][tok.upos] += 1
            counts["deprel"][tok.deprel] += 1
    index_symbols = [str(i) for i in range(position_cap + 1)]
    vocabs = {
        "lemma": Vocabulary.from_counts(counts["lemma"], lemma_vocab_size),
        "xpos": Vocabulary.from_counts(counts["xpos"]),
        "upos": Vocabulary.from_counts(counts["upos"]),
        "deprel": Vocabulary.from_counts(counts["deprel"]),
        "position": Vocabulary.from_symbols(index_symbols),
        "head": Vocabulary.from_symbols(index_symbols),
    }
    return schema_from_vocabs(
        vocabs, lemma_embedding=lemma_embedding, position_cap=position_cap, separator=separator
    )


def _factor_value(tok: Token, name: str, position_cap: int) -> str:
    if name == "lemma":
        return tok.lemma
    if name == "xpos":
        return tok.xpos
    if name == "upos":
        return tok.upos
    if name == "deprel":
        return tok.deprel
    if name == "position":
        return str(min(tok.position, position_cap))
    if name == "head":
        return str(min(tok.head, position_cap))
    raise KeyError(name)


def encode_tokens(tokens: list[Token], schema: FactorSchema) -> list[FactoredToken]:
    """Encode a token sequence (possibly with appended suggestions); OOV maps to unknown."""
    encoded = []
    for tok in tokens:
        indices = tuple(
            spec.vocab.index_of(_factor_value(tok, spec.name, schema.position_cap))
            for spec in schema.factors
        )
        encoded.append(FactoredToken(indices))
    return encoded


def encode_instance(inst: Instance, schema: FactorSchema) -> list[FactoredToken]:
    return encode_tokens(list(inst.tokens), schema)


def embed(token: FactoredToken, embeddings: EmbeddingSet) -> np.ndarray:
    """Concatenate the per-factor embedding rows in factor order."""
    if len(token.indices) != len(embeddings.matrices):
        raise ValueError("factored token does not match the embedding set")
    rows = []
    for idx, matrix in zip(token.indices, embeddings.matrices):
        if not 0 <= idx < matrix.shape[0]:
            raise IndexError(f"factor index {idx} out of range [0, {matrix.shape[0]})")
        rows.append(matrix[idx])
    return np.concatenate(rows)


def token_fields(tok: Token, position_cap: int) -> tuple[str, ...]:
    """The six factor strings in EXPORT_FIELD_ORDER, positions clamped."""
    return tuple(_factor_value(tok, name, position_cap) for name in EXPORT_FIELD_ORDER)


def export_factored(
    pairs: list[TrainingPair],
    schema: FactorSchema,
    dmap: DelemmaMap,
    separator: str | None = None,
) -> tuple[str, str]:
    """Render line-aligned factored source text and plain target text."""
    sep = schema.separator if separator is None else separator
    src_lines = []
    tgt_lines = []
    for i, pair in enumerate(pairs):
        if len(pair.target) != len(pair.source.tokens):
            raise FormatError(
                f"pair {i}: target length {len(pair.target)} != source length "
                f"{len(pair.source.tokens)}"
            )
        words = []
        for tok in delemma.append_forms(pair.source, dmap):
            fields = token_fields(tok, schema.position_cap)
            for value in fields:
                if sep in value:
                    raise FormatError(f"pair {i}: separator {sep!r} occurs in field {value!r}")
                if not value or any(ch.isspace() for ch in value):
                    raise FormatError(f"pair {i}: unwritable factor value {value!r}")
            words.append(sep.join(fields))
        src_lines.append(" ".join(words))
        for form in pair.target:
            if not form or any(ch.isspace() for ch in form):
                raise FormatError(f"pair {i}: unwritable target form {form!r}")
        tgt_lines.append(" ".join(pair.target))
    src = "\n".join(src_lines) + ("\n" if src_lines else "")
    tgt = "\n".join(tgt_lines) + ("\n" if tgt_lines else "")
    return src, tgt


def read_factored(text: str, separator: str = DEFAULT_SEPARATOR) -> list[list[tuple[str, ...]]]:
    """Re-import exported source text as per-sentence lists of field tuples."""
    sentences = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        tokens = []
        for word in line.split(" "):
            fields = tuple(word.split(separator))
            if len(fields) != len(EXPORT_FIELD_ORDER):
                raise FormatError(
                    f"line {lineno}: expected {len(EXPORT_FIELD_ORDER)} factors, "
                    f"got {len(fields)} in {word!r}"
                )
            tokens.append(fields)
        sentences.append(tokens)
    return sentences


def save_schema(schema: FactorSchema, path: str) -> None:
    """Persist the schema as JSON plus one symbol-per-line vocab file per factor."""
    directory = os.path.dirname(os.path.abspath(path))
    stem = os.path.splitext(os.path.basename(path))[0]
    entries = []
    for spec in schema.factors:
        vocab_file = f"{stem}.{spec.name}.vocab"
        with open(os.path.join(directory, vocab_file), "w", encoding="utf-8") as handle:
            handle.write("\n".join(spec.vocab.symbols) + "\n")
        entries.append(
            {
                "name": spec.name,
                "vocab_file": vocab_file,
                "vocab_size": len(spec.vocab),
                "embedding_size": spec.embedding_size,
            }
        )
    payload = {
        "factors": entries,
        "field_order": list(EXPORT_FIELD_ORDER),
        "position_cap": schema.position_cap,
        "separator": schema.separator,
        "total_dim": schema.total_dim,
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, ensure_ascii=False, indent=2, sort_keys=True)
        handle.write("\n")


def load_schema(path: str) -> FactorSchema:
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    directory = os.path.dirname(os.path.abspath(path))
    factors = []
    for entry in payload["factors"]:
        with open(os.path.join(directory, entry["vocab_file"]), encoding="utf-8") as handle:
            symbols = handle.read().splitlines()
        vocab = Vocabulary.from_symbols(symbols[4:])
        if tuple(symbols[:4]) != vocab.symbols[:4]:
            raise FormatError(f"vocab file for {entry['name']} lacks the reserved specials")
        factors.append(FactorSpec(entry["name"], vocab, entry["embedding_size"]))
    return FactorSchema(
        tuple(factors),
        position_cap=payload["position_cap"],
        separator=payload["separator"],
    )
