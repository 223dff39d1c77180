"""Vocabularies, vocabulary-overlap corpus filtering, and training pairs.

An external pre-parsed corpus is kept only where at least ``threshold``
(default 95%) of its token lemmas occur in the in-domain vocabulary;
retained gold sentences are shuffled into (source, target) training pairs.
Overlap counts token occurrences, not distinct types, and the threshold
comparison is inclusive.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from srp import deptree
from srp.conllu import FormatError, Instance

SPECIALS = ("<unk>", "<pad>", "<s>", "</s>")
UNK_INDEX = 0
PAD_INDEX = 1
BOS_INDEX = 2
EOS_INDEX = 3


@dataclass(frozen=True)
class Vocabulary:
    """Symbol table with the four reserved specials at indices 0..3.

    ``symbol in vocab`` tests content symbols only (specials excluded);
    ``index_of`` falls back to the unknown index for out-of-vocabulary
    symbols.
    """

    symbols: tuple[str, ...]
    index: dict[str, int]

    @classmethod
    def from_symbols(cls, content: list[str] | tuple[str, ...]) -> "Vocabulary":
        ordered = SPECIALS + tuple(s for s in content if s not in SPECIALS)
        if len(set(ordered)) != len(ordered):
            raise ValueError("duplicate symbols in vocabulary")
        return cls(ordered, {s: i for i, s in enumerate(ordered)})

    @classmethod
    def from_counts(cls, counts: Counter, max_size: int | None = None) -> "Vocabulary":
        ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
        kept = [symbol for symbol, _ in ranked if symbol not in SPECIALS]
        if max_size is not None:
            if max_size < 1:
                raise ValueError("max_size must be >= 1")
            kept = kept[:max_size]
        return cls.from_symbols(kept)

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, symbol: str) -> bool:
        i = self.index.get(symbol)
        return i is not None and i >= len(SPECIALS)

    def index_of(self, symbol: str) -> int:
        return self.index.get(symbol, UNK_INDEX)

    @property
    def content(self) -> tuple[str, ...]:
        return self.symbols[len(SPECIALS):]


@dataclass(frozen=True)
class TrainingPair:
    """A shuffled source instance paired with the gold-ordered target forms."""

    source: Instance
    target: tuple[str, ...]


@dataclass(frozen=True)
class FilterStats:
    total: int
    kept: int
    threshold: float


def build_vocab(corpus: list[Instance], max_size: int, field: str = "lemma") -> Vocabulary:
    """The ``max_size`` most frequent lemma or form values, ties lexicographic."""
    if not corpus:
        raise ValueError("cannot build a vocabulary from an empty corpus")
    if field not in ("lemma", "form"):
        raise ValueError(f"unknown vocabulary field {field!r}")
    counts: Counter = Counter()
    for i, inst in enumerate(corpus):
        if field == "lemma":
            counts.update(tok.lemma for tok in inst.tokens)
        else:
            if inst.gold_surface is None:
                raise FormatError(f"instance {i}: gold surface required for form vocabulary")
            counts.update(inst.gold_surface)
    return Vocabulary.from_counts(counts, max_size)


def full_lemma_vocab(corpus: list[Instance]) -> Vocabulary:
    """Untruncated lemma vocabulary; the reference set for overlap filtering."""
    if not corpus:
        raise ValueError("cannot build a vocabulary from an empty corpus")
    counts = Counter(tok.lemma for inst in corpus for tok in inst.tokens)
    return Vocabulary.from_counts(counts, None)


def vocab_overlap(inst: Instance, vocab: Vocabulary) -> float:
    """Fraction of token occurrences whose lemma is in the vocabulary."""
    n = len(inst.tokens)
    if n == 0:
        raise ValueError("cannot compute overlap of an empty instance")
    hits = sum(1 for tok in inst.tokens if tok.lemma in vocab)
    return hits / n


def filter_corpus(
    corpus: list[Instance], vocab: Vocabulary, threshold: float = 0.95
) -> tuple[list[Instance], FilterStats]:
    """Keep instances with overlap >= threshold (inclusive), order preserved."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must be within [0, 1]")
    kept = [inst for inst in corpus if vocab_overlap(inst, vocab) >= threshold]
    return kept, FilterStats(total=len(corpus), kept=len(kept), threshold=threshold)


def make_training_pair(gold: Instance, seed: int) -> TrainingPair:
    """Shuffle a gold sentence into a task-style source; target keeps gold order."""
    if gold.gold_surface is None:
        raise FormatError("training pairs require an instance with a gold surface")
    source = deptree.shuffle(gold, seed)
    return TrainingPair(source=source, target=tuple(gold.gold_surface))
