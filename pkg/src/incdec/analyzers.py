"""Exhaustive structural analysis of set functions at desk scale.

Every analyzer materializes the full value table once, rescales it to
integers over a common denominator (ratios of marginals are scale-free), and
then enumerates. Witnesses are chosen as the lexicographically smallest
minimizer, comparing element indices and subset bitmasks as integers, so the
result does not depend on enumeration order.
"""

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .errors import CapacityError, InputError, PreconditionError
from .rational import fmt
from .setfunc import GroundSet, Oracle

log = logging.getLogger(__name__)

DEFAULT_CAP = 12
DEFAULT_PAIR_CAP = 10
CAP_ENV = "INCDEC_ANALYZER_CAP"


def analyzer_cap(default: int = DEFAULT_CAP) -> int:
    env = os.environ.get(CAP_ENV)
    if not env:
        return default
    try:
        return int(env)
    except ValueError:
        raise InputError(f"{CAP_ENV} must be an integer, got {env!r}") from None


def _check_cap(what: str, n: int, cap: int | None, default: int) -> None:
    if cap is None:
        cap = analyzer_cap(default)
    if n > cap:
        raise CapacityError(what, n, cap, f"--cap or {CAP_ENV}")
    if n > default:
        log.warning("%s on n=%d exceeds the default cap %d; this may be slow", what, n, default)


class MonotoneWitness(NamedTuple):
    S: int
    e: int


class SubmodularWitness(NamedTuple):
    S: int
    e: int
    x: int


class MarginalWitness(NamedTuple):
    e: int
    A: int
    T: int


class PairWitness(NamedTuple):
    A: int
    B: int


class ExchangeWitness(NamedTuple):
    A: int
    B: int
    b: int


def witness_json(w, ground: GroundSet) -> dict | None:
    """Elements (lower-case fields) become labels, sets (upper-case) label lists."""
    if w is None:
        return None
    out = {}
    for name, v in w._asdict().items():
        out[name] = ground.names(v) if name.isupper() else ground.labels[v]
    return out


def _int_table(oracle: Oracle) -> list[int]:
    vals = oracle.table()
    d = math.lcm(*(v.denominator for v in vals))
    return [int(v * d) for v in vals]


@dataclass
class Structure:
    monotone: bool
    submodular: bool
    modular: bool
    monotone_witness: MonotoneWitness | None = None
    submodular_witness: SubmodularWitness | None = None
    modular_witness: SubmodularWitness | None = None


def _structure(vals: list[int], n: int) -> Structure:
    mono_w = sub_w = mod_w = None
    for s in range(1 << n):
        vs = vals[s]
        for e in range(n):
            be = 1 << e
            if s & be:
                continue
            me = vals[s | be] - vs
            if mono_w is None and me < 0:
                mono_w = MonotoneWitness(s, e)
            if sub_w is not None and mod_w is not None:
                continue
            for x in range(n):
                bx = 1 << x
                if x == e or s & bx:
                    continue
                later = vals[s | bx | be] - vals[s | bx]
                if sub_w is None and me < later:
                    sub_w = SubmodularWitness(s, e, x)
                if mod_w is None and me != later:
                    mod_w = SubmodularWitness(s, e, x)
        if mono_w is not None and sub_w is not None and mod_w is not None:
            break
    return Structure(
        monotone=mono_w is None,
        submodular=sub_w is None,
        modular=mod_w is None,
        monotone_witness=mono_w,
        submodular_witness=sub_w,
        modular_witness=mod_w,
    )


def structure_check(oracle: Oracle, cap: int | None = None) -> Structure:
    """Monotonicity, submodularity (decreasing marginals) and modularity."""
    _check_cap("structure_check", oracle.n, cap, DEFAULT_CAP)
    return _structure(_int_table(oracle), oracle.n)


def _require_monotone(vals: list[int], n: int, what: str) -> None:
    for s in range(1 << n):
        for e in range(n):
            if not s >> e & 1 and vals[s | 1 << e] < vals[s]:
                raise PreconditionError(f"{what} needs a monotone function (f(S+e) < f(S) at S={s}, e={e})")


def _marginals(vals: list[int], n: int, e: int) -> list[int]:
    """``m[S] = f(e | S)`` for every S; entries with bit e set are unused."""
    be = 1 << e
    m = [0] * (1 << n)
    for s in range(1 << n):
        if not s & be:
            m[s] = vals[s | be] - vals[s]
    return m


def _superset_min(m: list[int], n: int, e: int) -> list[tuple[int, int]]:
    """``best[A] = min (m[T], T)`` over ``A ⊆ T ⊆ E \\ {e}``."""
    be = 1 << e
    best = [(m[s], s) for s in range(1 << n)]
    for j in range(n):
        if j == e:
            continue
        bj = 1 << j
        for s in range(1 << n):
            if not s & (bj | be):
                cand = best[s | bj]
                if cand < best[s]:
                    best[s] = cand
    return best


def _subset_min(m: list[int], n: int, e: int) -> list[tuple[int, int]]:
    """``best[T] = min (m[A], A)`` over ``A ⊆ T``, for T avoiding e."""
    be = 1 << e
    best = [(m[s], s) for s in range(1 << n)]
    for j in range(n):
        if j == e:
            continue
        bj = 1 << j
        for s in range(1 << n):
            if s & bj and not s & be:
                cand = best[s ^ bj]
                if cand < best[s]:
                    best[s] = cand
    return best


def curvature(oracle: Oracle, cap: int | None = None) -> tuple[Fraction, MarginalWitness | None]:
    """Curvature ``c`` and the ``(e, A, T)`` minimizing ``f(e|T) / f(e|A)``.

    ``A ⊆ T ⊆ E \\ {e}`` with ``f(e|A) > 0``; no such triple gives ``c = 0``.
    """
    n = oracle.n
    _check_cap("curvature", n, cap, DEFAULT_CAP)
    vals = _int_table(oracle)
    _require_monotone(vals, n, "curvature")
    best_key = None
    for e in range(n):
        m = _marginals(vals, n, e)
        sup = _superset_min(m, n, e)
        be = 1 << e
        for a in range(1 << n):
            if a & be or m[a] <= 0:
                continue
            low, t = sup[a]
            key = (Fraction(low, m[a]), e, a, t)
            if best_key is None or key < best_key:
                best_key = key
    if best_key is None:
        return Fraction(0), None
    r, e, a, t = best_key
    return 1 - r, MarginalWitness(e, a, t)


def curvature_submodular(oracle: Oracle) -> Fraction:
    """Curvature through the shortcut valid for submodular functions."""
    n = oracle.n
    full = (1 << n) - 1
    best = None
    for e in range(n):
        single = oracle.marginal(e, 0)
        if single > 0:
            r = oracle.marginal(e, full & ~(1 << e)) / single
            best = r if best is None else min(best, r)
    return Fraction(0) if best is None else 1 - best


def generic_submodularity_ratio(oracle: Oracle, cap: int | None = None) -> tuple[Fraction, MarginalWitness | None]:
    """Generic submodularity ratio ``γ`` with the minimizing ``(e, A, T)``.

    Minimizes ``f(e|A) / f(e|T)`` over ``A ⊆ T ⊆ E \\ {e}`` with ``f(e|T) > 0``.
    """
    n = oracle.n
    _check_cap("generic_submodularity_ratio", n, cap, DEFAULT_CAP)
    vals = _int_table(oracle)
    _require_monotone(vals, n, "generic_submodularity_ratio")
    best_key = None
    for e in range(n):
        m = _marginals(vals, n, e)
        sub = _subset_min(m, n, e)
        be = 1 << e
        for t in range(1 << n):
            if t & be or m[t] <= 0:
                continue
            low, a = sub[t]
            key = (Fraction(low, m[t]), e, a, t)
            if best_key is None or key < best_key:
                best_key = key
    if best_key is None:
        return Fraction(1), None
    r, e, a, t = best_key
    return r, MarginalWitness(e, a, t)


def _submasks_ascending(c: int) -> list[int]:
    out = []
    b = c
    while True:
        out.append(b)
        if b == 0:
            break
        b = (b - 1) & c
    out.reverse()
    return out


def submodularity_ratio(oracle: Oracle, cap: int | None = None) -> tuple[Fraction, PairWitness | None]:
    """Submodularity ratio ``γ̂`` with the minimizing pair ``(A, B)``.

    Elements of B inside A contribute nothing to either side, so only disjoint
    pairs are enumerated.
    """
    n = oracle.n
    _check_cap("submodularity_ratio", n, cap, DEFAULT_PAIR_CAP)
    vals = _int_table(oracle)
    _require_monotone(vals, n, "submodularity_ratio")
    full = (1 << n) - 1
    best_key = None
    for a in range(1 << n):
        va = vals[a]
        rest = full & ~a
        sums = {0: 0}
        for b in _submasks_ascending(rest):
            if b == 0:
                continue
            low = b & -b
            sums[b] = sums[b ^ low] + vals[a | low] - va
            joint = vals[a | b] - va
            if joint <= 0:
                continue
            key = (Fraction(sums[b], joint), a, b)
            if best_key is None or key < best_key:
                best_key = key
    if best_key is None:
        return Fraction(1), None
    r, a, b = best_key
    return r, PairWitness(a, b)


def gross_substitute_check(oracle: Oracle, cap: int | None = None) -> tuple[bool, object]:
    """Submodularity plus the pairwise exchange inequality on marginals.

    For disjoint A, B with ``|B| >= 2`` and each ``b`` in B some other ``b'``
    must satisfy ``f(b|A) + f(B-b|A) <= f(b'|A) + f(B-b'|A)``. That fails
    exactly when one element is the unique strict maximizer of
    ``f(A+b) + f(A+B-b)``. Returns ``(flag, witness)`` where the witness is a
    :class:`SubmodularWitness` if submodularity fails, else the violating
    :class:`ExchangeWitness`.
    """
    n = oracle.n
    _check_cap("gross_substitute_check", n, cap, DEFAULT_CAP)
    vals = _int_table(oracle)
    st = _structure(vals, n)
    if not st.monotone:
        raise PreconditionError("gross_substitute_check needs a monotone function")
    if not st.submodular:
        return False, st.submodular_witness
    full = (1 << n) - 1
    for a in range(1 << n):
        rest = full & ~a
        for b in _submasks_ascending(rest):
            if b.bit_count() < 2:
                continue
            score = {}
            for x in range(n):
                bx = 1 << x
                if b & bx:
                    score[x] = vals[a | bx] + vals[a | (b ^ bx)]
            top = max(score.values())
            winners = [x for x, s in score.items() if s == top]
            if len(winners) == 1:
                return False, ExchangeWitness(a, b, winners[0])
    return True, None


@dataclass
class PropertyReport:
    monotone: bool
    submodular: bool
    modular: bool
    monotone_witness: MonotoneWitness | None = None
    submodular_witness: SubmodularWitness | None = None
    curvature: Fraction | None = None
    curvature_witness: MarginalWitness | None = None
    gamma: Fraction | None = None
    gamma_witness: MarginalWitness | None = None
    gamma_hat: Fraction | None = None
    gamma_hat_witness: PairWitness | None = None
    gross_substitute: bool | None = None
    gross_substitute_witness: object = None
    notes: list[str] = field(default_factory=list)

    def to_json(self, ground: GroundSet) -> dict:
        def val(x):
            return None if x is None else fmt(x)

        return {
            "monotone": {"value": self.monotone, "witness": witness_json(self.monotone_witness, ground)},
            "submodular": {"value": self.submodular, "witness": witness_json(self.submodular_witness, ground)},
            "modular": {"value": self.modular},
            "curvature": {"value": val(self.curvature), "witness": witness_json(self.curvature_witness, ground)},
            "generic_submodularity_ratio": {
                "value": val(self.gamma),
                "witness": witness_json(self.gamma_witness, ground),
            },
            "submodularity_ratio": {
                "value": val(self.gamma_hat),
                "witness": witness_json(self.gamma_hat_witness, ground),
            },
            "gross_substitute": {
                "value": self.gross_substitute,
                "witness": witness_json(self.gross_substitute_witness, ground),
            },
            "notes": list(self.notes),
        }


def analyze(oracle: Oracle, cap: int | None = None, pair_cap: int | None = None) -> PropertyReport:
    """Full :class:`PropertyReport`; quantities needing monotonicity are skipped otherwise.

    The submodularity ratio is skipped (with a note) when n exceeds its own cap.
    """
    n = oracle.n
    _check_cap("analyze", n, cap, DEFAULT_CAP)
    vals = _int_table(oracle)
    st = _structure(vals, n)
    rep = PropertyReport(
        monotone=st.monotone,
        submodular=st.submodular,
        modular=st.modular,
        monotone_witness=st.monotone_witness,
        submodular_witness=st.submodular_witness,
    )
    if not st.monotone:
        rep.notes.append("not monotone: curvature, ratios and gross substitutes are undefined")
        return rep
    big = n  # cap already enforced above
    rep.curvature, rep.curvature_witness = curvature(oracle, cap=big)
    rep.gamma, rep.gamma_witness = generic_submodularity_ratio(oracle, cap=big)
    if n <= (pair_cap if pair_cap is not None else analyzer_cap(DEFAULT_PAIR_CAP)):
        rep.gamma_hat, rep.gamma_hat_witness = submodularity_ratio(oracle, cap=big)
    else:
        rep.notes.append(f"submodularity ratio skipped: n={n} above its cap")
    rep.gross_substitute, rep.gross_substitute_witness = gross_substitute_check(oracle, cap=big)
    return rep
