"""(lemma, xpos) -> surface form lookup tables.

Built by counting gold-aligned corpora; candidate forms for a key are kept
in canonical order: count descending, ties broken by lexicographic form.
Maps persist as 4-column TSV (lemma, xpos, form, count) sorted by key.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from srp.conllu import FormatError, Instance, Token

Key = tuple[str, str]

SUGGESTION_SEPARATOR = "<sep>"
SUGGESTION_DEPREL = "suggest"


@dataclass(frozen=True)
class DelemmaMap:
    entries: dict[Key, tuple[tuple[str, int], ...]]

    def __len__(self) -> int:
        return len(self.entries)


def _canonical(counts: Counter) -> tuple[tuple[str, int], ...]:
    return tuple(sorted(counts.items(), key=lambda item: (-item[1], item[0])))


def build_map(corpus: list[Instance]) -> DelemmaMap:
    """Count (lemma, xpos) -> form over a gold-aligned corpus."""
    counts: dict[Key, Counter] = {}
    for i, inst in enumerate(corpus):
        if inst.gold_surface is None:
            raise FormatError(f"instance {i}: gold surface required to build a map")
        if len(inst.gold_surface) != len(inst.tokens):
            raise FormatError(
                f"instance {i}: gold surface length {len(inst.gold_surface)} "
                f"!= token count {len(inst.tokens)}"
            )
        for tok, form in zip(inst.tokens, inst.gold_surface):
            counts.setdefault((tok.lemma, tok.xpos), Counter())[form] += 1
    return DelemmaMap({key: _canonical(c) for key, c in counts.items()})


def merge(a: DelemmaMap, b: DelemmaMap) -> DelemmaMap:
    """Sum counts per (key, form); commutative and associative."""
    counts: dict[Key, Counter] = {}
    for dmap in (a, b):
        for key, forms in dmap.entries.items():
            bucket = counts.setdefault(key, Counter())
            for form, count in forms:
                bucket[form] += count
    return DelemmaMap({key: _canonical(c) for key, c in counts.items()})


def lookup(dmap: DelemmaMap, lemma: str, xpos: str) -> list[str]:
    """All candidate forms for (lemma, xpos), most frequent first; [] if absent."""
    return [form for form, _ in dmap.entries.get((lemma, xpos), ())]


def coverage(dmap: DelemmaMap, corpus: list[Instance]) -> float:
    """Fraction of gold tokens whose form appears among the looked-up candidates."""
    total = 0
    covered = 0
    for i, inst in enumerate(corpus):
        if inst.gold_surface is None or len(inst.gold_surface) != len(inst.tokens):
            raise FormatError(f"instance {i}: gold surface missing or misaligned")
        for tok, form in zip(inst.tokens, inst.gold_surface):
            total += 1
            if form in lookup(dmap, tok.lemma, tok.xpos):
                covered += 1
    if total == 0:
        return 1.0
    return covered / total


def append_forms(inst: Instance, dmap: DelemmaMap) -> list[Token]:
    """Source tokens plus a delimiter and every candidate form, in order.

    Appended tokens keep the triggering token's UPOS/XPOS, take deprel
    "suggest", and use sentinel position/head 0, so the sequence stays
    factorizable. Output length is n + 1 + sum of candidate counts.
    """
    out = list(inst.tokens)
    sep = SUGGESTION_SEPARATOR
    out.append(Token(0, sep, sep, sep, 0, sep))
    for tok in inst.tokens:
        for form in lookup(dmap, tok.lemma, tok.xpos):
            out.append(Token(0, form, tok.upos, tok.xpos, 0, SUGGESTION_DEPREL))
    return out


def dumps_map(dmap: DelemmaMap) -> str:
    lines = []
    for lemma, xpos in sorted(dmap.entries):
        for form, count in dmap.entries[(lemma, xpos)]:
            lines.append(f"{lemma}\t{xpos}\t{form}\t{count}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_map(text: str) -> DelemmaMap:
    counts: dict[Key, Counter] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise FormatError(f"map line {lineno}: expected 4 fields, got {len(fields)}")
        lemma, xpos, form, count_s = fields
        try:
            count = int(count_s)
        except ValueError as exc:
            raise FormatError(f"map line {lineno}: non-integer count {count_s!r}") from exc
        if count < 1:
            raise FormatError(f"map line {lineno}: count must be >= 1")
        counts.setdefault((lemma, xpos), Counter())[form] += count
    return DelemmaMap({key: _canonical(c) for key, c in counts.items()})


def load_map(path: str) -> DelemmaMap:
    with open(path, encoding="utf-8") as handle:
        return parse_map(handle.read())


def save_map(path: str, dmap: DelemmaMap) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps_map(dmap))
