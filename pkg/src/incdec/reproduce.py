"""Desk-scale reproduction of every bound and lower-bound construction.

Each criterion is a function returning a :class:`Criterion`; ``run_all``
drives them for the ``verify-paper`` command and the acceptance tests.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .algorithms import (
    TieBreak,
    best_ordering,
    double_greedy,
    opt_profile,
    prefix_values,
    randomized_pair,
)
from .analyzers import (
    analyze,
    curvature,
    curvature_submodular,
    generic_submodularity_ratio,
    gross_substitute_check,
)
from .harness import (
    TOL,
    BoundSpec,
    competitive_ratio,
    expected_competitive_ratio,
    incremental_unbounded_demo,
    verify_symmetry,
    verify_theorem_bound,
    verify_trace_invariants,
)
from .instances import Instance, build_named_instance, random_coverage, random_instance
from .rational import fmt, ratio
from .setfunc import ExplicitTable, GroundSet, Oracle

SUBMODULAR_BOUND = 1 + math.e / (math.e - 1)


@dataclass
class Criterion:
    name: str
    title: str
    passed: bool = True
    lines: list[str] = field(default_factory=list)
    elapsed: float = 0.0
    limit: float | None = None

    def expect(self, cond: bool, msg: str) -> bool:
        self.lines.append(("ok   " if cond else "FAIL ") + msg)
        if not cond:
            self.passed = False
        return cond

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lim = f" (limit {self.limit:g}s)" if self.limit else ""
        return f"{status} {self.name}: {self.title} [{self.elapsed:.2f}s{lim}]"


def _all_tiebreaks(n: int) -> list[TieBreak]:
    out = [TieBreak("min-index"), TieBreak("max-index")]
    if n <= 6:
        out += [TieBreak.priority(p) for p in itertools.permutations(range(n))]
    return out


def _brute_best_ratio(objective, opt) -> Fraction | float:
    """Literal n! search over orderings (kept separate from the subset DP)."""
    best = None
    for perm in itertools.permutations(range(objective.n)):
        vals = prefix_values(objective, perm)
        r = max(ratio(opt.values[k], vals[k]) for k in range(1, objective.n + 1))
        if best is None or r < best:
            best = r
    return best


def gross_substitute_lb(c: Criterion) -> None:
    inst = build_named_instance("gross_substitute_lb")
    g, h = inst.oracles()
    f = inst.objective()
    c.expect(gross_substitute_check(g)[0] and gross_substitute_check(h)[0], "g and h are gross substitute")
    opt = opt_profile(f)
    c.expect(opt.values[1] == 5 and opt.values[2] == 5, f"OPT_1 = {opt.values[1]}, OPT_2 = {opt.values[2]} (want 5, 5)")
    _, best = best_ordering(f, opt)
    c.expect(best == Fraction(5, 4), f"best ordering ratio {fmt(best)} (want 5/4)")
    c.expect(_brute_best_ratio(f, opt) == Fraction(5, 4), "3! enumeration agrees")
    worst = Fraction(0)
    for prec in ("lt", "le"):
        for tie in _all_tiebreaks(3):
            order, _ = double_greedy(g, h, prec, tie)
            worst = max(worst, competitive_ratio(f, order, opt).rho)
    c.expect(worst <= 2, f"double-greedy rho <= 2 over both comparisons and all tie-breaks (worst {fmt(worst)})")


def modular_remark(c: Criterion) -> None:
    inst = build_named_instance("modular_remark")
    g, h = inst.oracles()
    f = inst.objective()
    a = inst.ground.index("a")
    order, _ = double_greedy(g, h, "lt", TieBreak.priority([a], inst.ground.n))
    opt = opt_profile(f)
    rep = competitive_ratio(f, order, opt)
    c.expect(order == (0, 1), f"ordering {[inst.ground.labels[e] for e in order]} (want ['a', 'b'])")
    c.expect(rep.rho == 2, f"rho = {fmt(rep.rho)} (want 2)")
    chk = verify_theorem_bound(rep, BoundSpec("gross_substitute"), analyze(g), analyze(h))
    c.expect(chk.passed, f"gross-substitute bound 2 holds with slack {chk.slack:g}")


def curvature_lb(c: Criterion) -> None:
    n, cv = 6, Fraction(1, 2)
    inst = build_named_instance("curvature_lb", {"n": n, "c": cv})
    g, h = inst.oracles()
    f = inst.objective()
    measured, _ = curvature(h)
    c.expect(measured == cv, f"curvature = {fmt(measured)} (want 1/2)")
    opt = opt_profile(f)
    _, best = best_ordering(f, opt)
    lower = Fraction(2 * (n - 1)) / ((2 - cv) * (n - 1) + cv)
    c.expect(best >= lower, f"best ordering ratio {fmt(best)} >= {fmt(lower)}")
    c.expect(best == Fraction(5, 4), f"exact minimum {fmt(best)} (recorded 5/4)")
    c.expect(_brute_best_ratio(f, opt) == best, "6! enumeration agrees with the subset search")


def gamma_lb(c: Criterion) -> None:
    gamma = Fraction(1, 2)
    inst = build_named_instance("gamma_lb", {"gamma": gamma})
    g, h = inst.oracles()
    f = inst.objective()
    measured, _ = generic_submodularity_ratio(h)
    c.expect(measured == gamma, f"generic submodularity ratio = {fmt(measured)} (want 1/2)")
    opt = opt_profile(f)
    _, best = best_ordering(f, opt)
    want = (2 + 1 / gamma) / 3
    c.expect(best == want == Fraction(4, 3), f"best ordering ratio {fmt(best)} (want 4/3)")
    c.expect(_brute_best_ratio(f, opt) == best, "3! enumeration agrees")


def _k_subset_opt(f, k: int) -> Fraction:
    return max(f.eval(sum(1 << e for e in comb)) for comb in itertools.combinations(range(f.n), k))


def coverage_tight(c: Criterion) -> None:
    expected = {3: Fraction(46, 19), 4: Fraction(431, 175), 5: Fraction(5226, 2101)}
    prev = Fraction(0)
    for k in (3, 4, 5):
        inst = build_named_instance("coverage_tight", {"k": k})
        g, h = inst.oracles()
        f = inst.objective()
        bs = [inst.ground.index(f"B{i}") for i in range(1, k + 1)]
        order, _ = double_greedy(g, h, "lt", TieBreak.priority(bs, inst.ground.n))
        vals = prefix_values(f, order)
        c.expect(vals[k] == k**k - (k - 1) ** k, f"k={k}: f(S_k) = {vals[k]} (want {k**k - (k - 1) ** k})")
        opt_k = _k_subset_opt(f, k) if k == 5 else opt_profile(f).values[k]
        c.expect(opt_k == 2 * k**k - (k - 1) ** k, f"k={k}: OPT_k = {opt_k} (want {2 * k**k - (k - 1) ** k})")
        r = opt_k / vals[k]
        c.expect(r == expected[k], f"k={k}: step ratio {fmt(r)} (want {fmt(expected[k])})")
        c.expect(prev < r <= SUBMODULAR_BOUND + TOL, f"k={k}: increasing and <= 1+e/(e-1) = {SUBMODULAR_BOUND:.4f}")
        prev = r
        if k <= 4:
            rep = competitive_ratio(f, order, opt_profile(f))
            c.expect(verify_theorem_bound(rep, BoundSpec("submodular")).passed, f"k={k}: full-run rho {fmt(rep.rho)} within bound")


def _coverage_pair(seed: int, n: int = 8) -> Instance:
    rng = random.Random(seed)
    g = random_coverage(n, rng, universe=rng.randint(8, 64), density=rng.uniform(0.05, 0.4))
    h = random_coverage(n, rng, universe=rng.randint(8, 64), density=rng.uniform(0.05, 0.4))
    return Instance(GroundSet(n), g=g, h=h, name=f"coverage-pair seed={seed}")


def _pair_params(g: Oracle, h: Oracle) -> tuple[Fraction, Fraction]:
    c = max(curvature(g)[0], curvature(h)[0])
    gamma = min(generic_submodularity_ratio(g)[0], generic_submodularity_ratio(h)[0])
    return c, gamma


def main_sweep(c: Criterion, count: int = 100) -> None:
    bad_sub = bad_gen = 0
    worst = Fraction(0)
    for seed in range(count):
        inst = _coverage_pair(10_000 + seed)
        g, h = inst.oracles()
        f = inst.objective()
        opt = opt_profile(f)
        cv, gamma = _pair_params(g, h)
        for prec in ("lt", "le"):
            order, _ = double_greedy(g, h, prec)
            rep = competitive_ratio(f, order, opt)
            worst = max(worst, rep.rho)
            bad_sub += not verify_theorem_bound(rep, BoundSpec("submodular")).passed
            bad_gen += not verify_theorem_bound(rep, BoundSpec.general(cv, gamma)).passed
    c.expect(bad_sub == 0, f"{count} instances x 2 comparisons: rho <= 1+e/(e-1) (worst {float(worst):.4f}, {bad_sub} failures)")
    c.expect(bad_gen == 0, f"rho <= (1/γ)(1 + c e^c/(e^c-1)) with measured c, γ ({bad_gen} failures)")


def randomized_sweep(c: Criterion, count: int = 100) -> None:
    bad = 0
    worst_slack = math.inf
    for seed in range(count):
        inst = _coverage_pair(10_000 + seed)
        g, h = inst.oracles()
        f = inst.objective()
        opt = opt_profile(f)
        cv, gamma = _pair_params(g, h)
        rep = expected_competitive_ratio(f, randomized_pair(g, h), opt)
        chk = verify_theorem_bound(rep, BoundSpec.randomized(cv, gamma))
        bad += not chk.passed
        worst_slack = min(worst_slack, chk.slack)
    c.expect(bad == 0, f"{count} instances: expected rho <= 2c e^(cγ)/(e^(cγ)-1) (min slack {worst_slack:.4f})")


KINDS = ("table", "modular", "coverage")


def universal_invariants(c: Criterion, count: int = 200) -> None:
    failures: list[str] = []
    chains = 0
    for seed in range(count):
        rng = random.Random(20_000 + seed)
        n = rng.randint(2, 8)
        inst = random_instance(rng.choice(KINDS), rng.choice(KINDS), n, 20_000 + seed)
        g, h = inst.oracles()
        pg, ph = analyze(g), analyze(h)
        cv = max(pg.curvature, ph.curvature)
        gamma = min(pg.gamma, ph.gamma)
        both_sub = pg.submodular and ph.submodular
        chains += both_sub
        tie = TieBreak.priority(rng.sample(range(n), n))
        for prec in ("lt", "le"):
            _, trace = double_greedy(g, h, prec, tie)
            for res in verify_trace_invariants(trace, g, h, cv, gamma, submodular=both_sub):
                if not res.passed:
                    failures.append(f"{inst.name} {prec}: {res.name} {res.detail}")
            if not verify_symmetry(g, h, prec, tie).passed:
                failures.append(f"{inst.name} {prec}: symmetry")
        for name, o, p in (("g", g, pg), ("h", h, ph)):
            if p.gamma_hat is not None and not p.gamma <= p.gamma_hat:
                failures.append(f"{inst.name} {name}: gamma {p.gamma} > gamma_hat {p.gamma_hat}")
            if p.submodular and curvature_submodular(o) != p.curvature:
                failures.append(f"{inst.name} {name}: curvature shortcut differs")
    c.lines.extend("FAIL " + x for x in failures[:10])
    c.expect(not failures, f"{count} instances, both comparisons ({chains} with submodular g, h): {len(failures)} failures")


def _rescaled_submodular(seed: int) -> Instance:
    rng = random.Random(seed)
    n = rng.randint(3, 8)
    g = Oracle(random_coverage(n, rng, universe=rng.randint(8, 48), density=rng.uniform(0.1, 0.4)), GroundSet(n))
    h = random_coverage(n, rng, universe=rng.randint(8, 48), density=rng.uniform(0.1, 0.4))
    total_h = Oracle(h, GroundSet(n)).eval((1 << n) - 1)
    scale = total_h / g.eval((1 << n) - 1)
    g_scaled = ExplicitTable(tuple(v * scale for v in g.table()))
    return Instance(GroundSet(n), g=g_scaled, h=h, name=f"equal-totals seed={seed}")


def equal_totals(c: Criterion, count: int = 50) -> None:
    bad_prefix = bad_rho = bad_attest = 0
    for seed in range(count):
        inst = _rescaled_submodular(30_000 + seed)
        g, h = inst.oracles()
        f = inst.objective()
        full = inst.ground.full
        totals = (g.eval(full), h.eval(full))
        pg, ph = analyze(g), analyze(h)
        opt = opt_profile(f)
        for prec in ("lt", "le"):
            order, _ = double_greedy(g, h, prec)
            vals = prefix_values(f, order)
            bad_prefix += any(v < totals[1] for v in vals)
            rep = competitive_ratio(f, order, opt)
            try:
                bad_rho += not verify_theorem_bound(rep, BoundSpec("equal_totals"), pg, ph, totals).passed
            except ValueError:
                bad_attest += 1
    c.expect(bad_attest == 0, f"{count} instances attested submodular with g(E) = h(E)")
    c.expect(bad_prefix == 0, f"every prefix has f(S_k) >= h(E) ({bad_prefix} failures)")
    c.expect(bad_rho == 0, f"rho <= 2 + 1e-9 ({bad_rho} failures)")


def incremental_unbounded(c: Criterion) -> None:
    big = incremental_unbounded_demo(9, Fraction(1, 3))
    c.expect(big.best_ratio == Fraction(8, 3), f"n=9, eps=1/3: best ratio {fmt(big.best_ratio)} (want 8/3)")
    small = incremental_unbounded_demo(4, Fraction(1, 2))
    c.expect(small.best_ratio < big.best_ratio, f"n=4, eps=1/2: best ratio {fmt(small.best_ratio)} is smaller")
    for d in (big, small):
        want = min(1 / d.eps, max(Fraction(1), (d.n - 1) * d.eps))
        c.expect(d.best_ratio == want, f"n={d.n}: equals min(1/eps, max(1, (n-1) eps)) = {fmt(want)}")


CRITERIA: dict[str, tuple[str, Callable[[Criterion], None], float | None]] = {
    "gross_substitute_lb": ("gross-substitute lower bound 5/4", gross_substitute_lb, 1.0),
    "modular_remark": ("modular instance is exactly 2-competitive", modular_remark, 1.0),
    "curvature_lb": ("curvature lower-bound instance", curvature_lb, 30.0),
    "gamma_lb": ("generic submodularity ratio lower bound 4/3", gamma_lb, 1.0),
    "coverage_tight": ("tight coverage instance approaches 1+e/(e-1)", coverage_tight, 60.0),
    "main_sweep": ("double-greedy bounds on 100 coverage pairs", main_sweep, 300.0),
    "randomized_sweep": ("randomized two-order bound on 100 coverage pairs", randomized_sweep, None),
    "universal_invariants": ("trace, chain, increment, symmetry and ratio invariants", universal_invariants, None),
    "equal_totals": ("equal totals give 2-competitiveness", equal_totals, None),
    "incremental_unbounded": ("non-monotone incremental ratio grows with n", incremental_unbounded, 60.0),
}


def run_criterion(name: str) -> Criterion:
    title, fn, limit = CRITERIA[name]
    crit = Criterion(name, title, limit=limit)
    t0 = time.perf_counter()
    try:
        fn(crit)
    except Exception as exc:  # a crash is a failed criterion, reported as such
        crit.expect(False, f"raised {type(exc).__name__}: {exc}")
    crit.elapsed = time.perf_counter() - t0
    if limit is not None:
        crit.expect(crit.elapsed < limit, f"runtime {crit.elapsed:.2f}s < {limit:g}s")
    return crit


def run_all(only: list[str] | None = None) -> list[Criterion]:
    names = only or list(CRITERIA)
    return [run_criterion(n) for n in names]
