"""Acceptance suite: one test per criterion, each at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS line per
criterion (a failed assertion shows up as the pytest failure itself).
"""

import math
import random
import time
from fractions import Fraction

import pytest

from icm import (Interval, Segment, brute_force_strong_commute,
                 common_fixed_point, compose, decompose, endpoints,
                 entropy_lap, entropy_markov, entropy_setvalued,
                 forward_graph, graphs_equal, hats, interval, lap,
                 markov_partition, primary_critical_values, profile,
                 pullback_graph, segment_set, strongly_commute, tent,
                 verify_decomposition)
from conftest import (block_swap_pair, conjugated_tent_pair, coprime_pair,
                      double_reversal_pair, hat_demo_pair,
                      invariant_chain_pair, random_onto_map,
                      wiggly_staircase_map)

F = Fraction


def done(n, text):
    print(f"ACCEPTANCE {n}: PASS: {text}")


def test_01_tent_gcd_sweep():
    start = time.monotonic()
    for n in range(2, 11):
        for m in range(2, 11):
            expected = math.gcd(n, m) == 1
            assert strongly_commute(tent(n), tent(m)) == expected, (n, m)
    elapsed = time.monotonic() - start
    assert elapsed < 30.0
    done(1, f"81 exact tent decisions match gcd in {elapsed:.2f}s")


def test_02_graph_goldens():
    coords = [(0, 0), ("1", "3/4"), ("2/3", "1"), (0, "1/2"),
              ("2/3", 0), ("1", "1/4"), (0, "1")]
    pts = [(F(a), F(b)) for a, b in coords]
    expected = segment_set(Segment(a, b) for a, b in zip(pts, pts[1:]))
    fwd = forward_graph(tent(3), tent(4))
    assert fwd == expected
    assert graphs_equal(fwd, expected)
    pull = pullback_graph(tent(4), tent(6))
    smaller = forward_graph(tent(4), tent(6))
    assert pull.covers(smaller)
    assert not smaller.covers(pull)
    done(2, "forward graph matches the golden polyline; pullback of "
            "tent(4),tent(6) strictly contains the forward graph")


def test_03_hat_and_endpoint_counting(strongly_commuting_corpus):
    for name, f, g in strongly_commuting_corpus:
        n = len(f.critical_points())
        prof = profile(f, g)
        assert prof.total_endpoints == 2, name
        assert prof.total_hats == n, name
        assert not (set(f.critical_points().xs)
                    & set(g.critical_points().xs)), name
        assert prof.chain_holds and prof.count_bound_holds, name
        assert prof.parity_bound_holds, name
        assert sum(prof.endpoint_counts) == 2, name
        assert sum(prof.hat_counts) == n, name
    rng = random.Random(20260303)
    for _ in range(200):
        f, g = random_onto_map(rng), random_onto_map(rng)
        prof = profile(f, g)
        assert prof.chain_holds, (f.points, g.points)
    done(3, f"counting identities on {len(strongly_commuting_corpus)} "
            "strongly commuting pairs; chain inequalities on 200 random "
            "onto pairs")


def test_04_hat_example_goldens():
    f, g = hat_demo_pair()
    assert (F(1, 3), F(1, 3)) in {h.location for h in hats(f, g)}
    assert {e.location for e in endpoints(f, g)} == {
        (F(1, 6), F(1)), (F(1, 2), F(1)), (F(7, 9), F(1)), (F(8, 9), F(0))}
    done(4, "hat at (1/3,1/3) and the four golden endpoints")


def test_05_primary_value_goldens():
    pv = primary_critical_values(wiggly_staircase_map())
    assert pv.interior_values == (F(1, 11), F(3, 11), F(4, 11),
                                  F(6, 11), F(7, 11), F(10, 11))
    assert pv.start_index == 0
    assert pv.values[0] == F(0) and pv.values[-1] == F(1)
    assert len(pv.values) == 8
    done(5, "six interior primary values with boundary conventions 0 and 1")


def test_06_decomposition_goldens():
    budgets = []
    f, g = invariant_chain_pair()
    start = time.monotonic()
    D = decompose(f, g)
    budgets.append(time.monotonic() - start)
    assert D.case == "a"
    assert D.points == (F(0), F(1, 3), F(2, 3), F(1))
    assert verify_decomposition(f, g, D).passed

    f, g = block_swap_pair()
    start = time.monotonic()
    D = decompose(f, g)
    budgets.append(time.monotonic() - start)
    assert D.case == "b"
    assert D.points == (F(0), F(1, 2), F(3, 4), F(1))
    assert f.image(interval(0, "1/2")) == interval("3/4", 1)
    assert verify_decomposition(f, g, D).passed

    f, g = double_reversal_pair()
    start = time.monotonic()
    D = decompose(f, g)
    budgets.append(time.monotonic() - start)
    assert D.case == "c"
    assert verify_decomposition(f, g, D).passed

    assert max(budgets) < 1.0
    done(6, f"cases a/b/c with verified clauses, slowest {max(budgets):.3f}s")


def test_07_common_fixed_points(strongly_commuting_corpus):
    nonzero = 0
    for name, f, g in strongly_commuting_corpus:
        x = common_fixed_point(f, g)
        assert f(x) == x, name
        assert g(x) == x, name
        if x != 0:
            nonzero += 1
    f, g = invariant_chain_pair()
    assert common_fixed_point(f, g) == F(1, 3)
    assert nonzero >= 1
    done(7, f"exact common fixed points on {len(strongly_commuting_corpus)} "
            f"pairs ({nonzero} away from 0)")


def test_08_entropy():
    for n in range(2, 6):
        seq = entropy_lap(tent(n), 6)
        assert [c for _, c in seq.laps] == [n ** k for k in range(1, 7)]
    for n in range(2, 11):
        value = entropy_markov(markov_partition(tent(n)))
        assert abs(value - math.log(n)) <= 1e-9
    assert abs(entropy_setvalued(tent(3), tent(4)) - math.log(4)) <= 1e-9
    done(8, "lap sequences exact, Markov entropies within 1e-9, "
            "set-valued formula gives log 4")


def test_09_oracle_agreement(strongly_commuting_corpus):
    disagreements = []
    for name, f, g in strongly_commuting_corpus:
        if brute_force_strong_commute(f, g, 360) != strongly_commute(f, g):
            disagreements.append(name)
    rng = random.Random(6180339)
    randomized = []
    for i in range(20):
        n, m = coprime_pair(rng)
        randomized.append((f"good#{i}", *conjugated_tent_pair(rng, n, m)))
    for i in range(10):
        n = rng.choice([2, 3])
        k = rng.randint(2, 3)
        randomized.append((f"shared-factor#{i}",
                           *conjugated_tent_pair(rng, n, n * k)))
    for i in range(20):
        randomized.append((f"random#{i}", random_onto_map(rng),
                           random_onto_map(rng)))
    for name, f, g in randomized:
        if brute_force_strong_commute(f, g, 360) != strongly_commute(f, g):
            disagreements.append(name)
    assert not disagreements
    done(9, f"oracle agreement on {len(strongly_commuting_corpus)} corpus "
            f"pairs + {len(randomized)} randomized pairs, zero disagreements")


def test_10_property_suites(strongly_commuting_corpus, commuting_corpus):
    containment = 0
    for name, f, g in commuting_corpus:
        assert pullback_graph(f, g).covers(forward_graph(f, g)), name
        containment += 1
    assert containment >= 100

    connectivity = 0
    for name, f, g in strongly_commuting_corpus:
        gaps = [F(0), *f.critical_points().xs, F(1)]
        for lo, hi in zip(gaps, gaps[1:]):
            comps = g.preimage_interval(f.image(Interval(lo, hi)))
            assert len(comps) == 1, name
            connectivity += 1
    assert connectivity >= 100

    propagation = 0
    for name, f, g in strongly_commuting_corpus:
        for d in g.critical_points().xs:
            assert f(d) in g.critical_points(), name
            propagation += 1
        for c in f.critical_points().xs:
            assert g(c) in f.critical_points(), name
            propagation += 1
    assert propagation >= 100

    rng = random.Random(27182818)
    submult = 0
    for _ in range(100):
        f, g = random_onto_map(rng), random_onto_map(rng)
        assert lap(compose(f, g)) <= lap(f) * lap(g)
        submult += 1

    done(10, f"containment×{containment}, connectivity×{connectivity}, "
             f"propagation×{propagation}, submultiplicativity×{submult}")
