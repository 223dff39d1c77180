"""Deterministic template-generated English-like corpora.

Used for the bundled sample corpus, demos, and desk-scale testing. The
templates only use deprels covered by the default precedence table (plus
nmod, which lands on the unknown side), so the tree realizer can recover
the gold order exactly; inflected forms are a deterministic function of
(lemma, xpos), so a delemma map built on the corpus is unambiguous.
"""

from __future__ import annotations

import random

from srp.conllu import Instance, Token

NOUNS = ("dog", "cat", "bird", "horse", "garden", "house", "teacher", "farmer", "river", "student")
VERBS = ("walk", "talk", "jump", "look", "play", "work", "shout", "climb")
PROPER = ("Paris", "London", "Berlin", "Tokyo", "Oslo", "Dublin")
PREPOSITIONS = ("to", "from", "near", "in")

Row = tuple[str, str, str, int, str, str]  # lemma, upos, xpos, head, deprel, form


def inflect(lemma: str, xpos: str) -> str:
    if xpos == "NNS":
        return lemma + "s"
    if xpos == "VBZ":
        return lemma + "s"
    if xpos == "VBD":
        return lemma + "ed"
    return lemma


def _instance(rows: list[Row], sent_id: str) -> Instance:
    tokens = tuple(
        Token(i + 1, lemma, upos, xpos, head, deprel)
        for i, (lemma, upos, xpos, head, deprel, _) in enumerate(rows)
    )
    gold = tuple(form for *_, form in rows)
    return Instance(tokens, gold, {"sent_id": sent_id})


def _noun_phrase(rng: random.Random) -> tuple[str, str, str]:
    """(det lemma, noun lemma, noun xpos) with number agreement baked in."""
    number = rng.choice(("NN", "NNS"))
    det = "the" if number == "NNS" else rng.choice(("the", "a"))
    return det, rng.choice(NOUNS), number


def _verb_xpos(rng: random.Random, subject_xpos: str) -> str:
    if rng.random() < 0.5:
        return "VBD"
    return "VBZ" if subject_xpos == "NN" else "VBP"


def _row(lemma: str, upos: str, xpos: str, head: int, deprel: str) -> Row:
    return (lemma, upos, xpos, head, deprel, inflect(lemma, xpos))


def _plain(rng: random.Random) -> list[Row]:
    det, noun, nx = _noun_phrase(rng)
    verb = rng.choice(VERBS)
    return [
        _row(det, "DET", "DT", 2, "det"),
        _row(noun, "NOUN", nx, 3, "nsubj"),
        _row(verb, "VERB", _verb_xpos(rng, nx), 0, "root"),
        _row(".", "PUNCT", ".", 3, "punct"),
    ]


def _auxiliary(rng: random.Random) -> list[Row]:
    det, noun, nx = _noun_phrase(rng)
    verb = rng.choice(VERBS)
    return [
        _row(det, "DET", "DT", 2, "det"),
        _row(noun, "NOUN", nx, 4, "nsubj"),
        _row("will", "AUX", "MD", 4, "aux"),
        _row(verb, "VERB", "VB", 0, "root"),
        _row(".", "PUNCT", ".", 4, "punct"),
    ]


def _oblique(rng: random.Random) -> list[Row]:
    det, noun, nx = _noun_phrase(rng)
    verb = rng.choice(VERBS)
    prep = rng.choice(PREPOSITIONS)
    place = rng.choice(PROPER)
    return [
        _row(det, "DET", "DT", 2, "det"),
        _row(noun, "NOUN", nx, 3, "nsubj"),
        _row(verb, "VERB", _verb_xpos(rng, nx), 0, "root"),
        _row(prep, "ADP", "IN", 5, "case"),
        _row(place, "PROPN", "NNP", 3, "obl"),
        _row(".", "PUNCT", ".", 3, "punct"),
    ]


def _nominal_modifier(rng: random.Random) -> list[Row]:
    det, noun, nx = _noun_phrase(rng)
    verb = rng.choice(VERBS)
    prep = rng.choice(PREPOSITIONS)
    place = rng.choice(PROPER)
    return [
        _row(det, "DET", "DT", 2, "det"),
        _row(noun, "NOUN", nx, 5, "nsubj"),
        _row(prep, "ADP", "IN", 4, "case"),
        _row(place, "PROPN", "NNP", 2, "nmod"),
        _row(verb, "VERB", _verb_xpos(rng, nx), 0, "root"),
        _row(".", "PUNCT", ".", 5, "punct"),
    ]


def _clausal_modifier(rng: random.Random) -> list[Row]:
    noun = rng.choice(NOUNS)
    inner = rng.choice(VERBS)
    outer = rng.choice(VERBS)
    return [
        _row("a", "DET", "DT", 2, "det"),
        _row(noun, "NOUN", "NN", 5, "nsubj"),
        _row("to", "PART", "TO", 4, "mark"),
        _row(inner, "VERB", "VB", 2, "acl"),
        _row(outer, "VERB", rng.choice(("VBZ", "VBD")), 0, "root"),
        _row(".", "PUNCT", ".", 5, "punct"),
    ]


_TEMPLATES = (_plain, _auxiliary, _oblique, _nominal_modifier, _clausal_modifier)


def template_corpus(size: int, seed: int) -> list[Instance]:
    """``size`` gold-ordered instances drawn deterministically from ``seed``."""
    rng = random.Random(seed)
    corpus = []
    for i in range(size):
        rows = rng.choice(_TEMPLATES)(rng)
        corpus.append(_instance(rows, f"synth-{i:04d}"))
    return corpus
