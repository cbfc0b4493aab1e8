import dataclasses
import math
from fractions import Fraction

import pytest

from incdec.algorithms import TieBreak, double_greedy, opt_profile
from incdec.analyzers import analyze
from incdec.errors import CapacityError, PreconditionError
from incdec.harness import (
    BoundSpec,
    check_per_step,
    check_summed,
    check_trace_consistency,
    check_trace_lower_bound,
    competitive_ratio,
    expected_competitive_ratio,
    incremental_unbounded_demo,
    summed_factor,
    verify_symmetry,
    verify_theorem_bound,
    verify_trace_invariants,
)
from incdec.instances import build_named_instance, random_instance
from incdec.algorithms import randomized_pair
from incdec.rational import INF
from incdec.setfunc import ExplicitTable, GroundSet, Modular, Oracle, combine


def test_ratio_report_csv():
    inst = build_named_instance("gross_substitute_lb")
    f = inst.objective()
    order = tuple(inst.ground.index(x) for x in "cab")
    rep = competitive_ratio(f, order, opt_profile(f))
    lines = rep.to_csv(inst.ground).splitlines()
    assert lines[0] == "k,alg_value,opt_value,opt_witness,ratio"
    assert lines[1] == "1,5,5,{c},1"
    assert lines[2] == "2,4,5,{a;b},5/4"
    assert rep.rho == Fraction(5, 4)


def test_modular_remark_is_exactly_two():
    inst = build_named_instance("modular_remark")
    g, h = inst.oracles()
    f = combine(g, h)
    order, _ = double_greedy(g, h)
    rep = competitive_ratio(f, order, opt_profile(f))
    assert rep.rho == 2
    check = verify_theorem_bound(rep, BoundSpec("gross_substitute"), analyze(g), analyze(h))
    assert check.passed and check.slack == pytest.approx(0)


def test_infinite_ratio_encoding():
    ground = GroundSet(2, ("a", "b"))
    f = Oracle(ExplicitTable((0, 0, 1, 1)), ground)
    rep = competitive_ratio(f, (0, 1), opt_profile(f))
    assert rep.rho == INF and rep.infinite and rep.any_zero_denominator
    assert rep.to_json(ground)["rho"] == "inf"
    assert rep.to_csv(ground).splitlines()[1] == "1,0,1,{b},inf"
    check = verify_theorem_bound(rep, BoundSpec("submodular"))
    assert not check.passed and check.infinite


def test_zero_over_zero_is_one():
    f = Oracle(Modular((0, 0)), GroundSet(2))
    rep = competitive_ratio(f, (0, 1), opt_profile(f))
    assert rep.rho == 1


def test_bound_values():
    assert BoundSpec("submodular").value == pytest.approx(1 + math.e / (math.e - 1))
    assert BoundSpec.general(1, 1).value == pytest.approx(BoundSpec("submodular").value)
    assert BoundSpec.general(0, 1).value == 2
    assert BoundSpec.general(0, Fraction(1, 2)).value == 4
    assert BoundSpec.randomized(0, 1).value == 2
    assert BoundSpec.randomized(1, 1).value == pytest.approx(2 * math.e / (math.e - 1))
    assert BoundSpec.general(Fraction(1, 2), 0).value == math.inf
    assert BoundSpec("equal_totals").value == 2
    # monotone in c
    vals = [BoundSpec.general(Fraction(i, 10), 1).value for i in range(11)]
    assert vals == sorted(vals)


def test_bound_preconditions():
    inst = build_named_instance("gamma_lb", {"gamma": "1/2"})
    g, h = inst.oracles()
    gp, hp = analyze(g), analyze(h)
    f = combine(g, h)
    order, _ = double_greedy(g, h)
    rep = competitive_ratio(f, order, opt_profile(f))
    with pytest.raises(PreconditionError):
        verify_theorem_bound(rep, BoundSpec("submodular"), gp, hp)
    with pytest.raises(PreconditionError):
        verify_theorem_bound(rep, BoundSpec.general(0, 1), gp, hp)
    ok = verify_theorem_bound(rep, BoundSpec.general(gp.curvature, gp.gamma), gp, hp)
    assert ok.passed


def test_equal_totals_precondition():
    inst = build_named_instance("modular_remark")
    g, h = inst.oracles()
    with pytest.raises(PreconditionError):
        verify_theorem_bound(
            competitive_ratio(combine(g, h), (0, 1), opt_profile(combine(g, h))),
            BoundSpec("equal_totals"),
            analyze(g),
            analyze(h),
            (g.eval(3), h.eval(3)),
        )


def test_expected_ratio_averages_outcomes():
    inst = build_named_instance("gamma_lb", {"gamma": "1/2"})
    g, h = inst.oracles()
    f = combine(g, h)
    pair = randomized_pair(g, h)
    opt = opt_profile(f)
    rep = expected_competitive_ratio(f, pair, opt)
    a = competitive_ratio(f, pair.order_h, opt)
    b = competitive_ratio(f, pair.order_g_reversed, opt)
    for ra, rb, r in zip(a.rows, b.rows, rep.rows):
        assert r.alg_value == (ra.alg_value + rb.alg_value) / 2


def test_summed_factor_limit():
    assert summed_factor(Fraction(0)) == 1
    assert summed_factor(Fraction(1)) == pytest.approx(1 - math.exp(-1))


@pytest.mark.parametrize("seed", range(8))
def test_trace_invariants_hold(seed):
    inst = random_instance("coverage", "table", 5, 500 + seed)
    g, h = inst.oracles()
    gp, hp = analyze(g), analyze(h)
    c, gamma = max(gp.curvature, hp.curvature), min(gp.gamma, hp.gamma)
    for prec in ("lt", "le"):
        _, trace = double_greedy(g, h, prec)
        results = verify_trace_invariants(trace, g, h, c, gamma)
        assert all(r.passed for r in results), [r for r in results if not r.passed]


def test_tampered_trace_is_caught():
    inst = random_instance("coverage", "coverage", 5, 42)
    g, h = inst.oracles()
    f = combine(g, h)
    _, trace = double_greedy(g, h)
    bad = dataclasses.replace(trace, steps=list(trace.steps))
    s = bad.steps[1]
    bad.steps[1] = dataclasses.replace(s, phi=s.phi + 1)
    assert not check_trace_consistency(bad, g, h).passed
    bad.steps[1] = dataclasses.replace(s, phi=s.phi + 100)
    assert not check_trace_lower_bound(bad, f).passed
    flipped = dataclasses.replace(trace, steps=list(trace.steps))
    flipped.steps[0] = dataclasses.replace(s := trace.steps[0], side="G" if s.side == "H" else "H")
    assert not check_trace_consistency(flipped, g, h).passed


def test_per_step_and_summed_catch_wrong_parameters():
    inst = build_named_instance("gamma_lb", {"gamma": "1/2"})
    g, h = inst.oracles()
    _, trace = double_greedy(g, h)
    zeroed = dataclasses.replace(trace, steps=[dataclasses.replace(s, phi=Fraction(0)) for s in trace.steps])
    assert not check_per_step(zeroed, h, Fraction(0), Fraction(1)).passed
    assert not check_summed(zeroed, h, Fraction(0), Fraction(1)).passed
    assert check_per_step(trace, h, Fraction(0), Fraction(1, 2)).passed


def test_sweep_cap():
    inst = random_instance("modular", "modular", 11, 1)
    g, h = inst.oracles()
    _, trace = double_greedy(g, h)
    with pytest.raises(CapacityError, match="--sweep-cap"):
        verify_trace_invariants(trace, g, h, Fraction(0), Fraction(1))


@pytest.mark.parametrize("seed", range(10))
def test_symmetry(seed):
    inst = random_instance("table", "coverage", 1 + seed % 6, 900 + seed)
    g, h = inst.oracles()
    for prec in ("lt", "le"):
        for tie in (TieBreak("min-index"), TieBreak("max-index")):
            assert verify_symmetry(g, h, prec, tie).passed


def test_symmetry_single_element():
    ground = GroundSet(1)
    g = Oracle(Modular((1,)), ground)
    h = Oracle(Modular((1,)), ground)
    res = verify_symmetry(g, h, "lt")
    assert res.order == res.swapped_order == (0,)
    assert res.passed


def test_incremental_unbounded_demo():
    d = incremental_unbounded_demo(9, Fraction(1, 3))
    assert d.best_ratio == Fraction(8, 3)
    d = incremental_unbounded_demo(4, Fraction(1, 2))
    assert d.best_ratio == Fraction(3, 2)
    # grows without bound as n grows with eps fixed
    ratios = [incremental_unbounded_demo(n, Fraction(1, 4)).best_ratio for n in (3, 5, 7, 9)]
    assert ratios == sorted(ratios) and ratios[-1] > ratios[0]


def test_single_element_report():
    f = Oracle(Modular((1,)), GroundSet(1))
    rep = competitive_ratio(f, (0,), opt_profile(f))
    assert len(rep.rows) == 1 and rep.rho == 1
