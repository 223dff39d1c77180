"""Six-column factored token corpus: parsing, validation, serialization.

File format: UTF-8 text, LF line endings. One token per line with six
tab-separated fields (POSITION, LEMMA, UPOS, XPOS, HEAD, DEPREL), ``#``
comment lines, and a single blank line between instances. A comment line
``# text = ...`` carries the gold surface forms, whitespace-split and
aligned to tokens by position. Other ``# key = value`` comments land in
instance metadata.

Token lines must be sorted by position (token i has position i+1), which
makes parse/serialize exact inverses on canonical text.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

FIELD_COUNT = 6


class FormatError(ValueError):
    """A corpus file or instance violates the format contract."""


@dataclass(frozen=True)
class Token:
    """One input token carrying the six factors."""

    position: int
    lemma: str
    upos: str
    xpos: str
    head: int
    deprel: str


@dataclass(frozen=True)
class Instance:
    """An ordered token sequence, optionally with an aligned gold realization."""

    tokens: tuple[Token, ...]
    gold_surface: tuple[str, ...] | None = None
    metadata: dict[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Violation:
    rule: str
    position: int  # token position, 0 for instance-level rules
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_instance(inst: Instance) -> ValidationReport:
    """Check all Instance invariants, returning every violation found."""
    violations: list[Violation] = []
    n = len(inst.tokens)
    if n == 0:
        violations.append(Violation("empty-block", 0, "instance has no tokens"))
        return ValidationReport(tuple(violations))

    for tok in inst.tokens:
        if not tok.lemma:
            violations.append(Violation("empty-lemma", tok.position, "lemma is empty"))
        for name in ("lemma", "upos", "xpos", "deprel"):
            value = getattr(tok, name)
            if "\t" in value or "\n" in value:
                violations.append(
                    Violation("charset", tok.position, f"{name} contains tab/newline")
                )

    positions_sorted = all(tok.position == i + 1 for i, tok in enumerate(inst.tokens))
    if not positions_sorted:
        violations.append(
            Violation("positions", 0, f"token positions must be exactly 1..{n} in order")
        )

    roots = [tok.position for tok in inst.tokens if tok.head == 0]
    if len(roots) != 1:
        violations.append(
            Violation("root-count", 0, f"expected exactly one head-0 token, found {len(roots)}")
        )

    for tok in inst.tokens:
        if tok.head < 0 or tok.head > n:
            violations.append(
                Violation("head-range", tok.position, f"head {tok.head} out of range [0, {n}]")
            )
        elif tok.head == tok.position:
            violations.append(Violation("self-loop", tok.position, "token is its own head"))

    if inst.gold_surface is not None and len(inst.gold_surface) != n:
        violations.append(
            Violation(
                "text-length",
                0,
                f"gold surface has {len(inst.gold_surface)} tokens, expected {n}",
            )
        )

    # Cycle detection only makes sense once the structural rules hold.
    if not violations and len(roots) == 1:
        children: dict[int, list[int]] = {tok.position: [] for tok in inst.tokens}
        for tok in inst.tokens:
            if tok.head != 0:
                children[tok.head].append(tok.position)
        reached = set()
        stack = [roots[0]]
        while stack:
            p = stack.pop()
            reached.add(p)
            stack.extend(children[p])
        if len(reached) != n:
            off = sorted(set(children) - reached)
            violations.append(
                Violation("cycle", off[0], f"tokens {off} are not reachable from the root")
            )

    return ValidationReport(tuple(violations))


def _parse_token_line(line: str) -> Token:
    fields = line.split("\t")
    if len(fields) != FIELD_COUNT:
        raise FormatError(
            f"expected {FIELD_COUNT} tab-separated fields, got {len(fields)}: {line!r}"
        )
    pos_s, lemma, upos, xpos, head_s, deprel = fields
    try:
        position = int(pos_s)
        head = int(head_s)
    except ValueError as exc:
        raise FormatError(f"non-integer position/head in line {line!r}") from exc
    return Token(position, lemma, upos, xpos, head, deprel)


def parse_instance(block: str, validate: bool = True) -> Instance:
    """Parse one blank-line-free block of text into an Instance.

    Raises FormatError on malformed lines and, when ``validate`` is true,
    on any Instance invariant violation.
    """
    tokens: list[Token] = []
    gold: tuple[str, ...] | None = None
    metadata: dict[str, str] = {}
    for raw in block.splitlines():
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            key, sep, value = body.partition("=")
            if not sep:
                continue
            key = key.strip()
            value = value.strip()
            if key == "text":
                gold = tuple(value.split())
            else:
                metadata[key] = value
            continue
        tokens.append(_parse_token_line(line))
    if not tokens:
        raise FormatError("empty block: no token lines")
    inst = Instance(tuple(tokens), gold, metadata)
    if validate:
        report = check_instance(inst)
        if not report.ok:
            summary = "; ".join(
                f"{v.rule}@{v.position}: {v.message}" for v in report.violations
            )
            raise FormatError(summary)
    return inst


def serialize_instance(inst: Instance) -> str:
    """Render an Instance as canonical corpus text (trailing newline included)."""
    lines: list[str] = []
    if inst.gold_surface is not None:
        lines.append("# text = " + " ".join(inst.gold_surface))
    for key in sorted(inst.metadata):
        lines.append(f"# {key} = {inst.metadata[key]}")
    for tok in sorted(inst.tokens, key=lambda t: t.position):
        lines.append(
            f"{tok.position}\t{tok.lemma}\t{tok.upos}\t{tok.xpos}\t{tok.head}\t{tok.deprel}"
        )
    return "\n".join(lines) + "\n"


def iter_blocks(text: str) -> list[str]:
    """Split corpus text into instance blocks on blank lines."""
    blocks: list[str] = []
    current: list[str] = []
    for line in text.splitlines():
        if line.strip():
            current.append(line)
        elif current:
            blocks.append("\n".join(current))
            current = []
    if current:
        blocks.append("\n".join(current))
    return blocks


def parse_corpus(text: str, validate: bool = True) -> list[Instance]:
    """Parse a corpus file's text; errors carry the 0-based instance index."""
    instances: list[Instance] = []
    for i, block in enumerate(iter_blocks(text)):
        try:
            instances.append(parse_instance(block, validate=validate))
        except FormatError as exc:
            raise FormatError(f"instance {i}: {exc}") from exc
    return instances


def serialize_corpus(instances: list[Instance]) -> str:
    return "\n".join(serialize_instance(inst) for inst in instances)


def load_corpus(path: str, validate: bool = True) -> list[Instance]:
    with open(path, encoding="utf-8") as handle:
        return parse_corpus(handle.read(), validate=validate)


def save_corpus(path: str, instances: list[Instance]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(serialize_corpus(instances))


def strip_gold(inst: Instance) -> Instance:
    return dataclasses.replace(inst, gold_surface=None)
