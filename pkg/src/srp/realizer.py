"""Deterministic, non-neural surface realizers.

``realize_identity`` keeps the given token order; ``realize_tree``
rebuilds the dependency tree and orders each node's children with a
deprel precedence table. Both replace lemmas with the most frequent
candidate form. ``realize_oracle`` returns the gold target, pinning the
metric ceiling.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from srp import delemma, deptree
from srp.augment import TrainingPair
from srp.conllu import FormatError, Instance, Token
from srp.delemma import DelemmaMap


@dataclass(frozen=True)
class PrecedenceTable:
    """Deprel labels ordered left (before) or right (after) of their head.

    Labels absent from both lists go to ``unknown_side`` and sort after the
    listed labels there; ties keep input (ascending position) order.
    """

    before: tuple[str, ...]
    after: tuple[str, ...]
    unknown_side: str = "after"

    def __post_init__(self) -> None:
        overlap = set(self.before) & set(self.after)
        if overlap:
            raise ValueError(f"deprels on both sides: {sorted(overlap)}")
        if self.unknown_side not in ("before", "after"):
            raise ValueError("unknown_side must be 'before' or 'after'")


DEFAULT_PRECEDENCE = PrecedenceTable(
    before=("expl", "nsubj", "det", "case", "mark", "aux"),
    after=("acl", "obl", "punct"),
    unknown_side="after",
)


def load_precedence(path: str) -> PrecedenceTable:
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    return PrecedenceTable(
        before=tuple(payload.get("before", ())),
        after=tuple(payload.get("after", ())),
        unknown_side=payload.get("unknown_side", "after"),
    )


def _surface(tok: Token, dmap: DelemmaMap) -> str:
    forms = delemma.lookup(dmap, tok.lemma, tok.xpos)
    return forms[0] if forms else tok.lemma


def realize_identity(inst: Instance, dmap: DelemmaMap) -> list[str]:
    """Delemmatize in the given (shuffled) order; the floor baseline."""
    return [_surface(tok, dmap) for tok in inst.tokens]


def realize_tree(
    inst: Instance, dmap: DelemmaMap, precedence: PrecedenceTable = DEFAULT_PRECEDENCE
) -> list[str]:
    """Order tokens by recursive precedence-table placement, then delemmatize."""
    tree = deptree.build_tree(inst)
    before_rank = {label: i for i, label in enumerate(precedence.before)}
    after_rank = {label: i for i, label in enumerate(precedence.after)}

    def emit(position: int) -> list[int]:
        left: list[int] = []
        right: list[int] = []
        for child in tree.children[position]:
            label = tree.token_of[child].deprel
            if label in before_rank:
                left.append(child)
            elif label in after_rank:
                right.append(child)
            elif precedence.unknown_side == "before":
                left.append(child)
            else:
                right.append(child)
        left.sort(key=lambda c: before_rank.get(tree.token_of[c].deprel, len(before_rank)))
        right.sort(key=lambda c: after_rank.get(tree.token_of[c].deprel, len(after_rank)))
        ordered: list[int] = []
        for child in left:
            ordered.extend(emit(child))
        ordered.append(position)
        for child in right:
            ordered.extend(emit(child))
        return ordered

    return [_surface(tree.token_of[p], dmap) for p in emit(tree.root)]


def realize_oracle(pair: TrainingPair) -> list[str]:
    """Return the gold target verbatim; confirms metrics report their maxima."""
    if pair.target is None:
        raise FormatError("training pair has no target")
    return list(pair.target)
