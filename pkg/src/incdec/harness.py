"""Competitive-ratio evaluation and executable checks of the analytic guarantees."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algorithms import (
    Ordering,
    OptProfile,
    RandomizedPair,
    TieBreak,
    Trace,
    best_ordering,
    check_ordering,
    double_greedy,
    flip,
    opt_profile,
    prefix_values,
)
from .analyzers import PropertyReport, structure_check
from .errors import CapacityError, InputError, PreconditionError
from .instances import build_named_instance
from .rational import INF, Ratio, fmt, ratio
from .setfunc import CombinedObjective, GroundSet, Objective, Oracle, combine, members

TOL = 1e-9
SWEEP_CAP = 10


@dataclass(frozen=True)
class Row:
    k: int
    alg_value: Fraction
    opt_value: Fraction
    opt_witness: int
    ratio: Ratio


@dataclass
class RatioReport:
    rows: list[Row]

    @property
    def rho(self) -> Ratio:
        return max(r.ratio for r in self.rows)

    @property
    def any_zero_denominator(self) -> bool:
        return any(r.alg_value <= 0 for r in self.rows)

    @property
    def infinite(self) -> bool:
        return self.rho == INF

    def to_json(self, ground: GroundSet) -> dict:
        return {
            "rho": fmt(self.rho),
            "any_zero_denominator": self.any_zero_denominator,
            "rows": [
                {
                    "k": r.k,
                    "alg_value": fmt(r.alg_value),
                    "opt_value": fmt(r.opt_value),
                    "opt_witness": ground.names(r.opt_witness),
                    "ratio": fmt(r.ratio),
                }
                for r in self.rows
            ],
        }

    def to_csv(self, ground: GroundSet) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "alg_value", "opt_value", "opt_witness", "ratio"])
        for r in self.rows:
            w.writerow(
                [r.k, fmt(r.alg_value), fmt(r.opt_value), "{" + ";".join(ground.names(r.opt_witness)) + "}", fmt(r.ratio)]
            )
        return buf.getvalue()


def _report(values: Sequence[Fraction], opt: OptProfile) -> RatioReport:
    rows = [
        Row(k, values[k], opt.values[k], opt.witnesses[k], ratio(opt.values[k], values[k]))
        for k in range(1, opt.n + 1)
    ]
    return RatioReport(rows)


def competitive_ratio(objective: Objective, order: Ordering, opt: OptProfile) -> RatioReport:
    """Per-prefix ratios ``OPT_k / f(S_k)`` and their maximum."""
    n = objective.n
    if opt.n != n:
        raise InputError(f"optimum profile is for n={opt.n}, objective has n={n}")
    order = check_ordering(order, n)
    return _report(prefix_values(objective, order), opt)


def expected_competitive_ratio(objective: Objective, pair: RandomizedPair, opt: OptProfile) -> RatioReport:
    """Ratio report of the exact average of the two randomized outcomes."""
    n = objective.n
    if opt.n != n:
        raise InputError(f"optimum profile is for n={opt.n}, objective has n={n}")
    a = prefix_values(objective, check_ordering(pair.order_h, n))
    b = prefix_values(objective, check_ordering(pair.order_g_reversed, n))
    return _report([(x + y) / 2 for x, y in zip(a, b)], opt)


# ---------------------------------------------------------------------------
# bounds


def _growth(x: float) -> float:
    """``x e^x / (e^x - 1)`` with its limit 1 at x = 0."""
    if x == 0:
        return 1.0
    return -x / math.expm1(-x)


@dataclass(frozen=True)
class BoundSpec:
    """A guaranteed competitive ratio for a function class.

    ``kind`` is one of ``general``, ``submodular``, ``gross_substitute``,
    ``equal_totals`` and ``randomized``; the first and last take the
    curvature ``c`` and generic submodularity ratio ``gamma``.
    """

    kind: str
    c: Fraction | None = None
    gamma: Fraction | None = None

    @classmethod
    def general(cls, c, gamma):
        return cls("general", Fraction(c), Fraction(gamma))

    @classmethod
    def randomized(cls, c, gamma):
        return cls("randomized", Fraction(c), Fraction(gamma))

    @property
    def value(self) -> float:
        if self.kind in ("gross_substitute", "equal_totals"):
            return 2.0
        if self.kind == "submodular":
            return 1 + math.e / (math.e - 1)
        c, gamma = float(self.c), float(self.gamma)
        if gamma <= 0:
            return math.inf
        if self.kind == "general":
            return (1 + _growth(c)) / gamma
        if self.kind == "randomized":
            # 2c e^{cγ}/(e^{cγ}-1) = (2/γ) · growth(cγ); at c = 0 this is 2/γ
            return 2 * _growth(c * gamma) / gamma
        raise InputError(f"unknown bound class {self.kind!r}")


@dataclass
class BoundCheck:
    passed: bool
    rho: Ratio
    bound: float
    slack: float
    infinite: bool = False


def check_bound_preconditions(
    bound: BoundSpec,
    g_props: PropertyReport,
    h_props: PropertyReport,
    totals: tuple[Fraction, Fraction] | None = None,
) -> None:
    """Raise :class:`PreconditionError` unless the analyzer output admits ``bound``."""
    props = (g_props, h_props)
    if not all(p.monotone for p in props):
        raise PreconditionError(f"{bound.kind} bound needs monotone g and h")
    if bound.kind in ("general", "randomized"):
        c = max(p.curvature for p in props)
        gamma = min(p.gamma for p in props)
        if bound.c < c or bound.gamma > gamma:
            raise PreconditionError(
                f"bound parameters c={bound.c}, gamma={bound.gamma} are weaker than measured c={c}, gamma={gamma}"
            )
    elif bound.kind == "submodular":
        if not all(p.submodular for p in props):
            raise PreconditionError("submodular bound needs submodular g and h")
    elif bound.kind == "gross_substitute":
        if not all(p.gross_substitute for p in props):
            raise PreconditionError("gross-substitute bound needs gross-substitute g and h")
    elif bound.kind == "equal_totals":
        if not all(p.submodular for p in props):
            raise PreconditionError("equal-totals bound needs submodular g and h")
        if totals is None or totals[0] != totals[1]:
            raise PreconditionError(f"equal-totals bound needs g(E) = h(E), got {totals}")


def verify_theorem_bound(
    report: RatioReport,
    bound: BoundSpec,
    g_props: PropertyReport | None = None,
    h_props: PropertyReport | None = None,
    totals: tuple[Fraction, Fraction] | None = None,
) -> BoundCheck:
    """Compare ``rho`` with the class bound (relaxed by 1e-9, never tightened).

    When analyzer reports are supplied the class preconditions are enforced first.
    """
    if g_props is not None and h_props is not None:
        check_bound_preconditions(bound, g_props, h_props, totals)
    b = bound.value
    rho = report.rho
    if rho == INF:
        return BoundCheck(False, rho, b, -math.inf, infinite=True)
    slack = b - float(rho)
    return BoundCheck(float(rho) <= b + TOL, rho, b, slack)


# ---------------------------------------------------------------------------
# trace invariants


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    skipped: bool = False


def _sweep_guard(n: int, cap: int) -> None:
    if n > cap:
        raise CapacityError("verify_trace_invariants", n, cap, "--sweep-cap")


def check_trace_consistency(trace: Trace, g: Oracle, h: Oracle) -> CheckResult:
    """Recompute both marginals, the side, and phi of every step from the snapshots."""
    for s in trace.steps:
        H, G = trace.H(s.i - 1), trace.G(s.i - 1)
        hm, gm = h.marginal(s.chosen, H), g.marginal(s.chosen, G)
        to_g = hm < gm if trace.prec == "lt" else hm <= gm
        want = (H | (0 if to_g else 1 << s.chosen), G | (1 << s.chosen if to_g else 0))
        if (hm, gm) != (s.h_marginal, s.g_marginal) or s.phi != max(hm, gm):
            return CheckResult("trace_consistency", False, f"step {s.i}: marginals differ")
        if s.side != ("G" if to_g else "H") or (s.H, s.G) != want:
            return CheckResult("trace_consistency", False, f"step {s.i}: side or snapshot wrong")
        if s.H & s.G or (s.H | s.G).bit_count() != s.i:
            return CheckResult("trace_consistency", False, f"step {s.i}: H and G overlap or miscount")
    return CheckResult("trace_consistency", True)


def check_trace_lower_bound(trace: Trace, f: CombinedObjective) -> CheckResult:
    """``f(H_k) >= sum of the first k increments`` at every k."""
    total = Fraction(0)
    for k in range(len(trace.steps) + 1):
        if k:
            total += trace.steps[k - 1].phi
        if f.eval(trace.H(k)) < total:
            return CheckResult("trace_lower_bound", False, f"k={k}: f(H_k)={f.eval(trace.H(k))} < {total}")
    return CheckResult("trace_lower_bound", True)


def check_chain(trace: Trace, f: CombinedObjective) -> CheckResult:
    """Prefix values rise to the meeting point, complement-of-suffix values fall from it."""
    n = len(trace.steps)
    full = f.ground.full
    hv = [f.eval(trace.H(i)) for i in range(n + 1)]
    gv = [f.eval(full & ~trace.G(i)) for i in range(n + 1)]
    if hv[0] != f.g.eval(full) or gv[0] != f.h.eval(full):
        return CheckResult("chain", False, "endpoint values differ from g(E), h(E)")
    if hv[n] != gv[n]:
        return CheckResult("chain", False, f"f(H_n)={hv[n]} != f(G_n^c)={gv[n]}")
    for i in range(1, n + 1):
        if hv[i - 1] > hv[i]:
            return CheckResult("chain", False, f"f(H_{i - 1})={hv[i - 1]} > f(H_{i})={hv[i]}")
        if gv[i - 1] > gv[i]:
            return CheckResult("chain", False, f"f(G_{i - 1}^c)={gv[i - 1]} > f(G_{i}^c)={gv[i]}")
    return CheckResult("chain", True)


def check_per_step(trace: Trace, h: Oracle, c: Fraction, gamma: Fraction) -> CheckResult:
    """Lower bound on each increment against every reference set S.

    Checked for every S and every step m with ``S \\ F_m`` non-empty; steps
    with ``S ⊆ F_m`` are vacuous.
    """
    n = len(trace.steps)
    phi = trace.phis()
    prefix = [Fraction(0)]
    for p in phi:
        prefix.append(prefix[-1] + p)
    for s in range(1 << n):
        target = gamma * h.eval(s)
        inside = Fraction(0)  # sum of phi_i over chosen elements lying in S
        for m in range(n):
            if m:
                if s >> trace.steps[m - 1].chosen & 1:
                    inside += phi[m - 1]
            left = (s & ~trace.F(m)).bit_count()
            if left == 0:
                continue
            rhs = (c * (target - prefix[m]) + (1 - c) * (target - inside)) / left
            if phi[m] < rhs:
                return CheckResult("per_step", False, f"S={members(s)}, m={m}: phi={phi[m]} < {rhs}")
    return CheckResult("per_step", True)


def summed_factor(c: Fraction) -> float:
    """``(1 - e^{-c}) / c`` with its limit 1 at c = 0."""
    c = float(c)
    if c == 0:
        return 1.0
    return -math.expm1(-c) / c


def check_summed(trace: Trace, h: Oracle, c: Fraction, gamma: Fraction) -> CheckResult:
    """``((1 - e^{-c})/c) · γ · h(S) <= sum of the first |S| increments`` for all S."""
    n = len(trace.steps)
    factor = summed_factor(c)
    prefix = [Fraction(0)]
    for s in trace.steps:
        prefix.append(prefix[-1] + s.phi)
    for s in range(1 << n):
        lhs = factor * float(gamma * h.eval(s))
        rhs = float(prefix[s.bit_count()])
        if lhs > rhs + TOL:
            return CheckResult("summed", False, f"S={members(s)}: {lhs} > {rhs}")
    return CheckResult("summed", True)


def verify_trace_invariants(
    trace: Trace,
    g: Oracle,
    h: Oracle,
    c: Fraction,
    gamma: Fraction,
    submodular: bool | None = None,
    cap: int = SWEEP_CAP,
) -> list[CheckResult]:
    """Run every trace-level check; the chain is skipped unless g and h are submodular.

    ``c`` and ``gamma`` must bound the curvature and generic submodularity
    ratio of h (for a pair, use the larger curvature and smaller ratio).
    """
    n = g.n
    if len(trace.steps) != n or h.n != n:
        raise InputError("trace does not match the oracles")
    _sweep_guard(n, cap)
    g, h = g.normalize(), h.normalize()
    f = combine(g, h)
    if submodular is None:
        submodular = structure_check(g, cap=n).submodular and structure_check(h, cap=n).submodular
    out = [check_trace_consistency(trace, g, h), check_trace_lower_bound(trace, f)]
    if submodular:
        out.append(check_chain(trace, f))
    else:
        out.append(CheckResult("chain", True, "g or h not submodular", skipped=True))
    out.append(check_per_step(trace, h, c, gamma))
    out.append(check_summed(trace, h, c, gamma))
    return out


@dataclass
class SymmetryResult:
    passed: bool
    order: Ordering
    swapped_order: Ordering
    detail: str = ""


def verify_symmetry(g: Oracle, h: Oracle, prec: str = "lt", tie: TieBreak = TieBreak()) -> SymmetryResult:
    """Swapping g and h and flipping the comparison must reverse the ordering."""
    order, trace = double_greedy(g, h, prec, tie)
    order2, trace2 = double_greedy(h, g, flip(prec), tie)
    if order2 != tuple(reversed(order)):
        return SymmetryResult(False, order, order2, "swapped run is not the reverse")
    for a, b in zip(trace.steps, trace2.steps):
        if (a.H, a.G) != (b.G, b.H):
            return SymmetryResult(False, order, order2, f"step {a.i}: snapshots not swapped")
    return SymmetryResult(True, order, order2)


# ---------------------------------------------------------------------------
# plain incremental maximization


@dataclass
class UnboundedDemo:
    n: int
    eps: Fraction
    best_ratio: Ratio
    order: Ordering
    report: RatioReport
    ground: GroundSet = field(repr=False, default=None)


def incremental_unbounded_demo(n: int, eps, cap: int = 12) -> UnboundedDemo:
    """Best achievable ratio on the non-monotone incremental instance."""
    if n > cap:
        raise CapacityError("incremental_unbounded_demo", n, cap, "--order-cap")
    inst = build_named_instance("incremental_unbounded", {"n": n, "eps": eps})
    f = inst.single()
    opt = opt_profile(f)
    order, best = best_ordering(f, opt)
    return UnboundedDemo(n, Fraction(eps), best, order, competitive_ratio(f, order, opt), inst.ground)
