"""Corpus evaluation: BLEU, NIST, and DIST.

BLEU: corpus-level modified n-gram precision (orders 1..4, uniform
weights, geometric mean) with the multiplicative brevity penalty
exp(1 - r/c) applied when the hypothesis corpus is not longer than the
reference corpus; no smoothing by default, so any zero precision zeroes
the score. Reported on a 0..100 scale.

NIST: information-weighted n-gram co-occurrence over orders 1..5. The
information of an n-gram is log2(count(prefix) / count(ngram)) under the
reference corpus statistics (the empty prefix counts all reference
words). The brevity factor exp(beta * ln^2(min(c/r, 1))) is calibrated so
that it equals 0.5 at c/r = 2/3.

DIST: 100 * (1 - levenshtein(hyp, ref) / max(len)), over characters; the
corpus value is the unweighted mean over sentences. Two empty strings
score 100.

Tokenization is the caller's: hypotheses and references are token lists
(whitespace splitting upstream, no case normalization).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

MAX_BLEU_ORDER = 4
MAX_NIST_ORDER = 5

# exp(beta * ln^2(2/3)) == 0.5
_NIST_BETA = math.log(0.5) / math.log(2 / 3) ** 2

Sentence = list[str]


@dataclass(frozen=True)
class CorpusCounts:
    sentences: int
    hyp_tokens: int
    ref_tokens: int


@dataclass(frozen=True)
class EvalReport:
    bleu: float
    nist: float
    dist: float
    per_sentence: tuple[tuple[int, float], ...]
    counts: CorpusCounts

    def to_json_dict(self) -> dict:
        return {
            "bleu": self.bleu,
            "nist": self.nist,
            "dist": self.dist,
            "counts": {
                "sentences": self.counts.sentences,
                "hyp_tokens": self.counts.hyp_tokens,
                "ref_tokens": self.counts.ref_tokens,
            },
            "per_sentence": [[i, d] for i, d in self.per_sentence],
        }

    def format_table(self) -> str:
        header = f"{'BLEU':>8} {'DIST':>8} {'NIST':>8} {'SENTS':>8}"
        row = (
            f"{self.bleu:8.2f} {self.dist:8.2f} {self.nist:8.2f} "
            f"{self.counts.sentences:8d}"
        )
        return header + "\n" + row


def _check_aligned(hyps: list[Sentence], refs: list[Sentence]) -> None:
    if len(hyps) != len(refs):
        raise ValueError(f"{len(hyps)} hypotheses vs {len(refs)} references")
    if not hyps:
        raise ValueError("empty corpus")


def _ngram_counts(tokens: Sentence, order: int) -> Counter:
    return Counter(tuple(tokens[i : i + order]) for i in range(len(tokens) - order + 1))


def bleu(hyps: list[Sentence], refs: list[Sentence], smooth_eps: float = 0.0) -> float:
    """Corpus BLEU on a 0..100 scale; ``smooth_eps`` > 0 floors zero match counts."""
    _check_aligned(hyps, refs)
    matches = [0] * MAX_BLEU_ORDER
    totals = [0] * MAX_BLEU_ORDER
    hyp_len = 0
    ref_len = 0
    for hyp, ref in zip(hyps, refs):
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, MAX_BLEU_ORDER + 1):
            hyp_counts = _ngram_counts(hyp, n)
            if not hyp_counts:
                continue
            ref_counts = _ngram_counts(ref, n)
            matches[n - 1] += sum(
                min(count, ref_counts[gram]) for gram, count in hyp_counts.items()
            )
            totals[n - 1] += sum(hyp_counts.values())
    if hyp_len == 0:
        return 0.0
    log_sum = 0.0
    for n in range(MAX_BLEU_ORDER):
        numerator: float = matches[n]
        if numerator == 0:
            if smooth_eps > 0 and totals[n] > 0:
                numerator = smooth_eps
            else:
                return 0.0
        log_sum += math.log(numerator / totals[n])
    brevity = 1.0 if hyp_len > ref_len else math.exp(1.0 - ref_len / hyp_len)
    return 100.0 * brevity * math.exp(log_sum / MAX_BLEU_ORDER)


def nist(hyps: list[Sentence], refs: list[Sentence]) -> float:
    """Corpus NIST score (orders 1..5) with the calibrated brevity factor."""
    _check_aligned(hyps, refs)
    ref_ngrams: Counter = Counter()
    total_ref_words = 0
    for ref in refs:
        total_ref_words += len(ref)
        for n in range(1, MAX_NIST_ORDER + 1):
            ref_ngrams.update(_ngram_counts(ref, n))

    def info(gram: tuple[str, ...]) -> float:
        denominator = ref_ngrams[gram]
        numerator = total_ref_words if len(gram) == 1 else ref_ngrams[gram[:-1]]
        if denominator == 0 or numerator == 0:
            return 0.0
        return math.log2(numerator / denominator)

    gained = [0.0] * MAX_NIST_ORDER
    emitted = [0] * MAX_NIST_ORDER
    hyp_len = 0
    for hyp, ref in zip(hyps, refs):
        hyp_len += len(hyp)
        for n in range(1, MAX_NIST_ORDER + 1):
            hyp_counts = _ngram_counts(hyp, n)
            if not hyp_counts:
                continue
            ref_counts = _ngram_counts(ref, n)
            emitted[n - 1] += sum(hyp_counts.values())
            for gram, count in hyp_counts.items():
                matched = min(count, ref_counts[gram])
                if matched:
                    gained[n - 1] += matched * info(gram)
    if hyp_len == 0 or total_ref_words == 0:
        return 0.0
    score = sum(
        gained[n] / emitted[n] for n in range(MAX_NIST_ORDER) if emitted[n] > 0
    )
    ratio = min(hyp_len / total_ref_words, 1.0)
    brevity = math.exp(_NIST_BETA * math.log(ratio) ** 2)
    return score * brevity


def levenshtein(a: str, b: str) -> int:
    """Classic edit distance (insert/delete/substitute, unit costs)."""
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ch_a in enumerate(a, start=1):
        current = [i] + [0] * len(b)
        for j, ch_b in enumerate(b, start=1):
            current[j] = min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (ch_a != ch_b),
            )
        previous = current
    return previous[len(b)]


def dist(hyp: str, ref: str) -> float:
    """Inverse normalized character edit distance on a 0..100 scale."""
    longest = max(len(hyp), len(ref))
    if longest == 0:
        return 100.0
    return 100.0 * (1.0 - levenshtein(hyp, ref) / longest)


def evaluate(hyps: list[Sentence], refs: list[Sentence]) -> EvalReport:
    """Corpus BLEU and NIST plus mean per-sentence DIST, with diagnostics."""
    _check_aligned(hyps, refs)
    per_sentence = tuple(
        (i, dist(" ".join(hyp), " ".join(ref)))
        for i, (hyp, ref) in enumerate(zip(hyps, refs))
    )
    mean_dist = sum(d for _, d in per_sentence) / len(per_sentence)
    counts = CorpusCounts(
        sentences=len(hyps),
        hyp_tokens=sum(len(h) for h in hyps),
        ref_tokens=sum(len(r) for r in refs),
    )
    return EvalReport(
        bleu=bleu(hyps, refs),
        nist=nist(hyps, refs),
        dist=mean_dist,
        per_sentence=per_sentence,
        counts=counts,
    )
