"""Problem instances: the named lower-bound constructions and random generators."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import InputError
from .rational import to_value
from .setfunc import (
    CombinedObjective,
    Coverage,
    ExplicitTable,
    GroundSet,
    Modular,
    Oracle,
    SetFunctionSpec,
    combine,
    members,
)


@dataclass
class Instance:
    """A ``(g, h)`` pair for incremental-decremental runs, or a single ``f``."""

    ground: GroundSet
    g: SetFunctionSpec | None = None
    h: SetFunctionSpec | None = None
    f: SetFunctionSpec | None = None
    raw: bool = False
    name: str | None = None

    def __post_init__(self):
        if self.f is not None:
            ok = self.g is None and self.h is None
        else:
            ok = self.g is not None and self.h is not None
        if not ok:
            raise InputError("an instance has either both 'g' and 'h', or only 'f'")

    @property
    def mode(self) -> str:
        return "incremental" if self.f is not None else "combined"

    def oracles(self) -> tuple[Oracle, Oracle]:
        if self.mode != "combined":
            raise InputError("operation needs a (g, h) pair; this instance has a single f")
        norm = not self.raw
        return Oracle(self.g, self.ground, norm), Oracle(self.h, self.ground, norm)

    def single(self) -> Oracle:
        if self.mode != "incremental":
            raise InputError("operation needs a single incremental objective f")
        return Oracle(self.f, self.ground, not self.raw)

    def objective(self) -> CombinedObjective | Oracle:
        if self.mode == "incremental":
            return self.single()
        g, h = self.oracles()
        return combine(g, h, normalize=not self.raw)


CATALOG = {
    "curvature_lb": ("n", "c"),
    "gamma_lb": ("gamma",),
    "gross_substitute_lb": (),
    "modular_remark": (),
    "coverage_tight": ("k",),
    "incremental_unbounded": ("n", "eps"),
}


def _params(id: str, params: Mapping[str, object]) -> dict[str, Fraction]:
    expected = CATALOG[id]
    extra = set(params) - set(expected)
    if extra:
        raise InputError(f"{id}: unknown parameter(s) {sorted(extra)}")
    missing = [p for p in expected if p not in params]
    if missing:
        raise InputError(f"{id}: missing parameter(s) {missing}")
    return {k: to_value(v) for k, v in params.items()}


def _integer(name: str, v: Fraction, lo: int) -> int:
    if v.denominator != 1 or v < lo:
        raise InputError(f"parameter {name} must be an integer >= {lo}, got {v}")
    return int(v)


def build_named_instance(id: str, params: Mapping[str, object] | None = None) -> Instance:
    """Construct one of the catalog instances exactly.

    ``params`` values may be ints, fractions or ``"p/q"`` strings.
    """
    if id not in CATALOG:
        raise InputError(f"unknown named instance {id!r}; known: {sorted(CATALOG)}")
    p = _params(id, params or {})
    builder = globals()["_build_" + id]
    inst = builder(**p)
    inst.name = id
    return inst


def _build_curvature_lb(n: Fraction, c: Fraction) -> Instance:
    n = _integer("n", n, 2)
    if not 0 <= c <= 1:
        raise InputError(f"curvature parameter c must lie in [0, 1], got {c}")
    # element 0 is the distinguished element
    values = []
    for m in range(1 << n):
        size = m.bit_count()
        if m & 1:
            values.append(n - 1 + (1 - c) * (size - 1))
        else:
            values.append(Fraction(size))
    ground = GroundSet(n, ("e*",) + tuple(f"e{i}" for i in range(1, n)))
    spec = ExplicitTable(tuple(values))
    return Instance(ground, g=spec, h=spec)


def _build_gamma_lb(gamma: Fraction) -> Instance:
    if not 0 < gamma <= 1:
        raise InputError(f"gamma must lie in (0, 1], got {gamma}")
    inv = 1 / gamma
    # bit order: {}, a, b, ab, c, ac, bc, abc
    spec = ExplicitTable((0, 1, 1, 2, 1, 1 + inv, 2, 2 + inv))
    return Instance(GroundSet(3, ("a", "b", "c")), g=spec, h=spec)


def _build_gross_substitute_lb() -> Instance:
    h = ExplicitTable((0, 1, 2, 3, 2, 3, 2, 3))
    g = ExplicitTable((0, 2, 1, 3, 2, 2, 3, 3))
    return Instance(GroundSet(3, ("a", "b", "c")), g=g, h=h)


def _build_modular_remark() -> Instance:
    return Instance(
        GroundSet(2, ("a", "b")),
        g=Modular((1, 0)),
        h=Modular((1, 1)),
    )


def coverage_tight_sets(k: int) -> tuple[list[frozenset[int]], list[frozenset[int]]]:
    """Sets ``A_1..A_k`` and ``B_1..B_k`` over the universe of k-tuples.

    A tuple ``(x_1, .., x_k)`` with entries in ``1..k`` is encoded as
    ``sum((x_i - 1) * k**(i - 1))``. ``A_i`` fixes the last entry to ``i``;
    ``B_i`` fixes entry ``i`` to ``k``.
    """
    size = k**k
    a_sets = [[] for _ in range(k)]
    b_sets = [[] for _ in range(k)]
    for u in range(size):
        digits = [(u // k**i) % k for i in range(k)]  # x_i - 1
        a_sets[digits[k - 1]].append(u)
        for i, d in enumerate(digits):
            if d == k - 1:
                b_sets[i].append(u)
    return [frozenset(s) for s in a_sets], [frozenset(s) for s in b_sets]


def _build_coverage_tight(k: Fraction) -> Instance:
    k = _integer("k", k, 2)
    a_sets, b_sets = coverage_tight_sets(k)
    h = Coverage(k**k, tuple(a_sets + b_sets))
    weights = [0] * k + [(k - 1) ** (i - 1) * k ** (k - i) for i in range(1, k + 1)]
    labels = tuple(f"A{i}" for i in range(1, k + 1)) + tuple(f"B{i}" for i in range(1, k + 1))
    return Instance(GroundSet(2 * k, labels), g=Modular(tuple(weights)), h=h)


def _build_incremental_unbounded(n: Fraction, eps: Fraction) -> Instance:
    n = _integer("n", n, 2)
    if not 0 < eps < 1:
        raise InputError(f"eps must lie in (0, 1), got {eps}")
    values = [Fraction(1) if m & 1 else m.bit_count() * eps for m in range(1 << n)]
    ground = GroundSet(n, ("e*",) + tuple(f"e{i}" for i in range(1, n)))
    return Instance(ground, f=ExplicitTable(tuple(values)))


# ---------------------------------------------------------------------------
# random generators (seeded, exact integer values)


def random_coverage(n: int, rng: random.Random, universe: int = 64, density: float = 0.15) -> Coverage:
    sets = []
    for _ in range(n):
        s = frozenset(u for u in range(universe) if rng.random() < density)
        if not s:
            s = frozenset({rng.randrange(universe)})
        sets.append(s)
    return Coverage(universe, tuple(sets))


def random_modular(n: int, rng: random.Random, high: int = 10) -> Modular:
    return Modular(tuple(rng.randint(0, high) for _ in range(n)))


def random_monotone_table(n: int, rng: random.Random, high: int = 6) -> ExplicitTable:
    """Arbitrary monotone function: each set exceeds its best subset by a random step."""
    values = [Fraction(0)] * (1 << n)
    for m in range(1, 1 << n):
        best = max(values[m & ~(1 << i)] for i in members(m))
        values[m] = best + rng.randint(0, high)
    return ExplicitTable(tuple(values))


def random_spec(kind: str, n: int, rng: random.Random) -> SetFunctionSpec:
    if kind == "coverage":
        return random_coverage(n, rng, universe=rng.randint(8, 64))
    if kind == "modular":
        return random_modular(n, rng)
    if kind == "table":
        return random_monotone_table(n, rng)
    raise InputError(f"unknown random spec kind {kind!r}")


def random_instance(kind_g: str, kind_h: str, n: int, seed: int) -> Instance:
    rng = random.Random(seed)
    g = random_spec(kind_g, n, rng)
    h = random_spec(kind_h, n, rng)
    return Instance(GroundSet(n), g=g, h=h, name=f"random[{kind_g},{kind_h},n={n},seed={seed}]")
