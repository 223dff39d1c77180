"""Dependency tree reconstruction, DFS linearization, and input shuffling.

The linearizer is a pre-order depth-first traversal (head emitted before
its children's subtrees) where each node's child order is drawn uniformly
at random. All randomness comes from ``random.Random`` (Mersenne Twister)
instances created per call from the caller's seed, so the same
(input, seed) pair always yields the same output on any build; bit
equality across differently seeded generators is not promised.
"""

from __future__ import annotations

import dataclasses
import random
from dataclasses import dataclass

from srp.conllu import Instance, Token


@dataclass(frozen=True)
class DepTree:
    """Rooted tree over token positions; child lists start in ascending order."""

    node_count: int
    root: int
    children: dict[int, tuple[int, ...]]
    token_of: dict[int, Token]


@dataclass(frozen=True)
class Ordering:
    """A permutation of positions 1..n giving the output order."""

    sequence: tuple[int, ...]


def build_tree(inst: Instance) -> DepTree:
    """Reconstruct the tree from head indices of a valid instance."""
    kids: dict[int, list[int]] = {tok.position: [] for tok in inst.tokens}
    root = 0
    for tok in inst.tokens:
        if tok.head == 0:
            root = tok.position
        else:
            kids[tok.head].append(tok.position)
    children = {p: tuple(sorted(c)) for p, c in kids.items()}
    token_of = {tok.position: tok for tok in inst.tokens}
    return DepTree(len(inst.tokens), root, children, token_of)


def linearize_random(tree: DepTree, seed: int) -> Ordering:
    """Pre-order DFS with uniformly shuffled child order, deterministic per seed."""
    rng = random.Random(seed)
    out: list[int] = []

    def visit(p: int) -> None:
        out.append(p)
        kids = list(tree.children[p])
        rng.shuffle(kids)
        for k in kids:
            visit(k)

    visit(tree.root)
    return Ordering(tuple(out))


def reorder(inst: Instance, ordering: Ordering) -> Instance:
    """Emit tokens in the given order, renumbering positions and heads.

    The gold surface, if present, is permuted alongside the tokens so it
    stays aligned by position. The result's tree is isomorphic to the
    input's.
    """
    seq = ordering.sequence
    n = len(inst.tokens)
    if len(seq) != n:
        raise ValueError(f"ordering length {len(seq)} does not match instance size {n}")
    if sorted(seq) != list(range(1, n + 1)):
        raise ValueError("ordering is not a permutation of the instance positions")
    new_position = {old: i + 1 for i, old in enumerate(seq)}
    by_position = {tok.position: tok for tok in inst.tokens}
    tokens = tuple(
        dataclasses.replace(
            by_position[old],
            position=i + 1,
            head=0 if by_position[old].head == 0 else new_position[by_position[old].head],
        )
        for i, old in enumerate(seq)
    )
    gold = None
    if inst.gold_surface is not None:
        gold = tuple(inst.gold_surface[old - 1] for old in seq)
    return Instance(tokens, gold, dict(inst.metadata))


def shuffle(inst: Instance, seed: int) -> Instance:
    """Randomly permute an instance into a task input; drops the gold surface."""
    rng = random.Random(seed)
    perm = list(range(1, len(inst.tokens) + 1))
    rng.shuffle(perm)
    shuffled = reorder(inst, Ordering(tuple(perm)))
    return dataclasses.replace(shuffled, gold_surface=None)


def canonical_form(tree: DepTree) -> tuple:
    """Order-independent encoding of the (lemma, deprel) tree, for isomorphism checks."""

    def encode(p: int) -> tuple:
        tok = tree.token_of[p]
        return (tok.lemma, tok.deprel, tuple(sorted(encode(c) for c in tree.children[p])))

    return encode(tree.root)


def subtree_positions(tree: DepTree, position: int) -> frozenset[int]:
    """All positions in the subtree rooted at ``position`` (inclusive)."""
    seen: set[int] = set()
    stack = [position]
    while stack:
        p = stack.pop()
        seen.add(p)
        stack.extend(tree.children[p])
    return frozenset(seen)
