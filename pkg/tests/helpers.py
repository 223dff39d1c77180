"""Shared test utilities: instance generators and brute-force oracles."""

from __future__ import annotations

import itertools
import random

from srp.conllu import Instance, Token
from srp.deptree import DepTree

LEMMAS = ("dog", "cat", "run", "see", "the", "a", "house", "tree", "walk", "bird")
UPOS = ("NOUN", "VERB", "DET", "ADJ", "ADV")
XPOS = ("NN", "VBZ", "DT", "JJ", "RB", "NNS", "VBD")
DEPRELS = ("nsubj", "obj", "det", "amod", "advmod", "obl", "root", "punct")

CHERNOBYL_TEXT = (
    "1\tlearn\tVERB\tVB\t2\tacl\n"
    "2\tlot\tNOUN\tNN\t4\tnsubj\n"
    "3\tthere\tPRON\tEX\t4\texpl\n"
    "4\tbe\tVERB\tVBZ\t0\troot\n"
    "5\tabout\tADP\tIN\t8\tcase\n"
    "6\ta\tDET\tDT\t2\tdet\n"
    "7\t.\tPUNCT\t.\t4\tpunct\n"
    "8\tChernobyl\tPROPN\tNNP\t1\tobl\n"
    "9\tto\tPART\tTO\t1\tmark\n"
)

# Ordering that restores the original English sentence from the shuffled example.
CHERNOBYL_GOLD_ORDER = (3, 4, 6, 2, 9, 1, 5, 8, 7)
CHERNOBYL_GOLD_FORMS = ("There", "is", "a", "lot", "to", "learn", "about", "Chernobyl", ".")


def random_tree_heads(rng: random.Random, n: int) -> dict[int, int]:
    """Random single-rooted acyclic head assignment over positions 1..n."""
    order = list(range(1, n + 1))
    rng.shuffle(order)
    heads = {order[0]: 0}
    for i in range(1, n):
        heads[order[i]] = order[rng.randrange(i)]
    return heads


def random_instance(
    rng: random.Random, min_n: int = 1, max_n: int = 12, with_gold: bool = False
) -> Instance:
    n = rng.randint(min_n, max_n)
    heads = random_tree_heads(rng, n)
    tokens = []
    for p in range(1, n + 1):
        deprel = "root" if heads[p] == 0 else rng.choice(DEPRELS[:-2])
        tokens.append(
            Token(
                p,
                rng.choice(LEMMAS),
                rng.choice(UPOS),
                rng.choice(XPOS),
                heads[p],
                deprel,
            )
        )
    gold = None
    if with_gold:
        gold = tuple(tok.lemma + rng.choice(("", "s", "ed")) for tok in tokens)
    return Instance(tuple(tokens), gold)


def all_preorder_orders(tree: DepTree) -> set[tuple[int, ...]]:
    """Enumerate every pre-order DFS output over all child permutations."""
    memo: dict[int, list[tuple[int, ...]]] = {}

    def expand(p: int) -> list[tuple[int, ...]]:
        if p in memo:
            return memo[p]
        kids = tree.children[p]
        if not kids:
            memo[p] = [(p,)]
            return memo[p]
        child_orders = {c: expand(c) for c in kids}
        outs = []
        for perm in itertools.permutations(kids):
            for combo in itertools.product(*(child_orders[c] for c in perm)):
                seq = (p,) + tuple(x for part in combo for x in part)
                outs.append(seq)
        memo[p] = outs
        return outs

    return set(expand(tree.root))


def is_contiguous(sequence: tuple[int, ...], members: frozenset[int]) -> bool:
    indices = sorted(i for i, p in enumerate(sequence) if p in members)
    return indices == list(range(indices[0], indices[-1] + 1))
