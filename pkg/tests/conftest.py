"""Shared fixtures: the named example maps and deterministic map generators."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from icm import PLMap, compose, conjugate, iterate, make_plmap, tent


# -- named example maps -----------------------------------------------------

def hat_demo_pair() -> tuple[PLMap, PLMap]:
    """A non-commuting pair whose pullback graph shows a hat and an isolated
    point: f peaks at 1/3 then rises, g drifts down from 2/3."""
    f = make_plmap([(0, 0), ("1/3", "2/3"), ("2/3", 0), (1, 1)])
    g = make_plmap([(0, "2/3"), ("1/6", 1), ("1/3", "2/3"),
                    ("2/3", "1/3"), ("5/6", 0), (1, "1/3")])
    return f, g


def invariant_chain_pair() -> tuple[PLMap, PLMap]:
    """Strongly commuting pair with the common invariant blocks
    [0,1/3], [1/3,2/3], [2/3,1]."""
    f = make_plmap([(0, "1/3"), ("1/6", 0), ("1/3", "1/3"), ("4/9", "5/9"),
                    ("5/9", "4/9"), ("2/3", "2/3"), (1, 1)])
    g = make_plmap([(0, 0), ("1/9", "1/3"), ("2/9", 0), ("1/3", "1/3"),
                    ("2/3", "2/3"), ("5/6", 1), ("11/12", "5/6"), (1, 1)])
    return f, g


def block_swap_pair() -> tuple[PLMap, PLMap]:
    """Strongly commuting pair where f exchanges [0,1/2] and [3/4,1] while
    g keeps every block invariant."""
    f = make_plmap([(0, "3/4"), ("1/4", 1), ("1/2", "3/4"), ("3/4", "1/2"),
                    ("7/8", 0), (1, "1/2")])
    g = make_plmap([(0, 0), ("1/6", "1/2"), ("1/3", 0), ("1/2", "1/2"),
                    ("7/12", "2/3"), ("2/3", "7/12"), ("3/4", "3/4"),
                    ("5/6", 1), ("11/12", "3/4"), (1, 1)])
    return f, g


def double_reversal_pair() -> tuple[PLMap, PLMap]:
    """Strongly commuting pair where both maps exchange the outer blocks."""
    f = block_swap_pair()[0]
    g = make_plmap([(0, 1), ("1/6", "3/4"), ("1/3", 1), ("1/2", "3/4"),
                    ("7/12", "7/12"), ("2/3", "2/3"), ("3/4", "1/2"),
                    ("5/6", 0), ("11/12", "1/2"), (1, 0)])
    return f, g


def wiggly_staircase_map() -> PLMap:
    """An increasing-on-average map with three folding bands, whose primary
    critical values are 1/11, 3/11, 4/11, 6/11, 7/11, 10/11."""
    return make_plmap([(0, 0), ("1/11", "3/11"), ("2/11", "1/11"),
                       ("3/11", "5/11"), ("4/11", "4/11"), ("5/11", "6/11"),
                       ("6/11", "5/11"), ("7/11", "10/11"), ("8/11", "8/11"),
                       ("9/11", "9/11"), ("10/11", "7/11"), (1, 1)])


# -- deterministic generators -------------------------------------------------

def random_onto_map(rng: random.Random, max_interior: int = 5,
                    denom: int = 12) -> PLMap:
    while True:
        k = rng.randint(1, max_interior)
        xs = sorted(rng.sample(range(1, denom), k))
        ys = [rng.randint(0, denom) for _ in range(k + 2)]
        hit = rng.sample(range(k + 2), 2)
        ys[hit[0]], ys[hit[1]] = 0, denom
        if any(a == b for a, b in zip(ys, ys[1:])):
            continue
        points = [(Fraction(0), Fraction(ys[0], denom))]
        points += [(Fraction(x, denom), Fraction(y, denom))
                   for x, y in zip(xs, ys[1:-1])]
        points.append((Fraction(1), Fraction(ys[-1], denom)))
        return PLMap(tuple(points))


def random_homeo(rng: random.Random, max_interior: int = 3,
                 denom: int = 16, decreasing: bool = False) -> PLMap:
    k = rng.randint(0, max_interior)
    xs = sorted(rng.sample(range(1, denom), k)) if k else []
    ys = sorted(rng.sample(range(1, denom), k)) if k else []
    points = [(Fraction(0), Fraction(0))]
    points += [(Fraction(x, denom), Fraction(y, denom)) for x, y in zip(xs, ys)]
    points.append((Fraction(1), Fraction(1)))
    h = PLMap(tuple(points))
    if decreasing:
        flip = make_plmap([(0, 1), (1, 0)])
        h = compose(flip, h)
    return h


def conjugated_tent_pair(rng: random.Random, n: int, m: int) -> tuple[PLMap, PLMap]:
    h = random_homeo(rng, decreasing=rng.random() < 0.25)
    return conjugate(tent(n), h), conjugate(tent(m), h)


def coprime_pair(rng: random.Random, lo: int = 2, hi: int = 7) -> tuple[int, int]:
    while True:
        n, m = rng.randint(lo, hi), rng.randint(lo, hi)
        if math.gcd(n, m) == 1:
            return n, m


# -- corpora -------------------------------------------------------------------

@pytest.fixture(scope="session")
def strongly_commuting_corpus() -> list[tuple[str, PLMap, PLMap]]:
    corpus: list[tuple[str, PLMap, PLMap]] = []
    for n in range(2, 11):
        for m in range(2, 11):
            if math.gcd(n, m) == 1:
                corpus.append((f"tent({n}),tent({m})", tent(n), tent(m)))
    corpus.append(("invariant-chain", *invariant_chain_pair()))
    corpus.append(("block-swap", *block_swap_pair()))
    corpus.append(("double-reversal", *double_reversal_pair()))
    rng = random.Random(20260811)
    for i in range(20):
        n, m = coprime_pair(rng)
        f, g = conjugated_tent_pair(rng, n, m)
        corpus.append((f"conj#{i}(T{n},T{m})", f, g))
    rng = random.Random(5551212)
    for i in range(4):
        h = random_homeo(rng, decreasing=i == 3)
        for label, (f, g) in (("chain", invariant_chain_pair()),
                              ("swap", block_swap_pair()),
                              ("reversal", double_reversal_pair())):
            corpus.append((f"conj-{label}#{i}",
                           conjugate(f, h), conjugate(g, h)))
    return corpus


@pytest.fixture(scope="session")
def commuting_corpus(strongly_commuting_corpus) -> list[tuple[str, PLMap, PLMap]]:
    """Commuting (not necessarily strongly) pairs: tents with any gcd,
    iterate pairs, and the strongly commuting corpus."""
    corpus = list(strongly_commuting_corpus)
    for n in range(2, 9):
        for m in range(2, 9):
            if math.gcd(n, m) != 1:
                corpus.append((f"tent({n}),tent({m})", tent(n), tent(m)))
    rng = random.Random(424242)
    for i in range(15):
        f = random_onto_map(rng, max_interior=3)
        corpus.append((f"self-iterate#{i}", f, iterate(f, 2)))
    return corpus
