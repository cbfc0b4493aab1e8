import random

import pytest

import brute
from incdec.algorithms import (
    TieBreak,
    best_ordering,
    double_greedy,
    greedy_order,
    opt_profile,
    prefix_values,
    randomized_pair,
)
from incdec.errors import CapacityError, InputError, PreconditionError
from incdec.instances import build_named_instance, random_instance
from incdec.setfunc import ExplicitTable, GroundSet, Modular, Oracle, combine


def test_greedy_modular():
    o = Oracle(Modular((3, 1, 2)), GroundSet(3))
    assert greedy_order(o) == (0, 2, 1)


def test_tie_breaks():
    o = Oracle(Modular((1, 1, 1)), GroundSet(3))
    assert greedy_order(o, TieBreak("min-index")) == (0, 1, 2)
    assert greedy_order(o, TieBreak("max-index")) == (2, 1, 0)
    ground = GroundSet(3, ("a", "b", "c"))
    tie = TieBreak.parse("priority:b", ground)
    assert tie.ranking == (1, 0, 2)
    assert greedy_order(o, tie) == (1, 0, 2)
    with pytest.raises(InputError):
        TieBreak.parse("fancy", ground)


@pytest.mark.parametrize("seed", range(10))
def test_zero_g_reduces_to_greedy(seed):
    rng = random.Random(seed)
    n = 5
    weights = rng.sample(range(1, 50), n)
    h = Oracle(Modular(tuple(weights)), GroundSet(n))
    g = Oracle(Modular((0,) * n), GroundSet(n))
    order, trace = double_greedy(g, h, "lt")
    assert order == greedy_order(h)
    assert all(s.side == "H" for s in trace.steps)


def test_modular_remark_ordering():
    inst = build_named_instance("modular_remark")
    g, h = inst.oracles()
    order, trace = double_greedy(g, h)
    assert inst.ground.names(sum(1 << e for e in order)) == ["a", "b"]
    assert order == (0, 1)
    assert [s.side for s in trace.steps] == ["H", "H"]


def test_modular_remark_le_sends_tie_to_g():
    inst = build_named_instance("modular_remark")
    g, h = inst.oracles()
    order, trace = double_greedy(g, h, "le")
    assert trace.steps[0].side == "G"
    assert order[-1] == 0


def test_coverage_tight_trace():
    inst = build_named_instance("coverage_tight", {"k": 3})
    g, h = inst.oracles()
    tie = TieBreak.parse("priority:B1,B2,B3", inst.ground)
    order, trace = double_greedy(g, h, "lt", tie)
    assert inst.ground.names(trace.H(3)) == ["B1", "B2", "B3"]
    assert trace.G(3) == 0
    assert [inst.ground.labels[e] for e in order] == ["B1", "B2", "B3", "A1", "A2", "A3"]


def test_trace_snapshots_partition():
    inst = random_instance("table", "coverage", 6, 3)
    g, h = inst.oracles()
    order, trace = double_greedy(g, h)
    n = 6
    for i in range(n + 1):
        assert trace.H(i) & trace.G(i) == 0
        assert trace.F(i).bit_count() == i
    hs = trace.H(n).bit_count()
    assert set(order[:hs]) == set(e for e in range(n) if trace.H(n) >> e & 1)


def test_unnormalized_input_rejected():
    ground = GroundSet(2)
    g = Oracle(ExplicitTable((1, 2, 2, 3)), ground)
    h = Oracle(Modular((1, 1)), ground)
    with pytest.raises(PreconditionError):
        double_greedy(g, h)
    order, _ = double_greedy(g, h, auto_normalize=True)
    assert sorted(order) == [0, 1]


def test_randomized_pair_modular_remark():
    inst = build_named_instance("modular_remark")
    g, h = inst.oracles()
    pair = randomized_pair(g, h)
    assert pair.order_h == (0, 1)
    assert pair.order_g_reversed == (1, 0)


@pytest.mark.parametrize("seed", range(12))
def test_opt_profile_matches_enumeration(seed):
    inst = random_instance("coverage", "table", 1 + seed % 6, seed)
    f = inst.objective()
    prof = opt_profile(f)
    assert prof.values == brute.opt_values(f)
    for k, w in enumerate(prof.witnesses):
        assert w.bit_count() == k and f.eval(w) == prof.values[k]


def test_opt_profile_witness_is_lexicographically_smallest():
    o = Oracle(Modular((1, 1, 1)), GroundSet(3))
    prof = opt_profile(o)
    assert prof.witnesses == [0, 0b001, 0b011, 0b111]


@pytest.mark.parametrize("seed", range(12))
def test_best_ordering_matches_permutations(seed):
    n = 2 + seed % 5
    kinds = ["coverage", "table", "modular"]
    inst = random_instance(kinds[seed % 3], kinds[(seed + 1) % 3], n, 100 + seed)
    f = inst.objective()
    order, rho = best_ordering(f)
    assert rho == brute.best_ratio(f)
    assert brute.ratio_of(f, order, brute.opt_values(f)) == rho


def test_best_ordering_named_values():
    from fractions import Fraction

    assert best_ordering(build_named_instance("gross_substitute_lb").objective())[1] == Fraction(5, 4)
    assert best_ordering(build_named_instance("gamma_lb", {"gamma": "1/2"}).objective())[1] == Fraction(4, 3)
    inst = build_named_instance("curvature_lb", {"n": 6, "c": "1/2"})
    assert best_ordering(inst.objective())[1] == Fraction(5, 4)


def test_prefix_values():
    inst = build_named_instance("gross_substitute_lb")
    f = inst.objective()
    assert prefix_values(f, (2, 0, 1)) == [3, 5, 4, 3]


def test_caps():
    o = Oracle(Modular((1,) * 17), GroundSet(17))
    with pytest.raises(CapacityError, match="--order-cap"):
        best_ordering(o)
    with pytest.raises(CapacityError, match="--opt-cap"):
        opt_profile(o, cap=10)


def test_combined_and_single_share_interface():
    inst = build_named_instance("incremental_unbounded", {"n": 4, "eps": "1/2"})
    f = inst.single()
    order, rho = best_ordering(f)
    assert rho == brute.best_ratio(f)
    g, h = build_named_instance("modular_remark").oracles()
    assert combine(g, h).n == 2
