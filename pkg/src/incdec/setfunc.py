"""Ground sets, set-function specifications and memoized value oracles.

Subsets are plain ``int`` bitmasks: element ``i`` is bit ``i``. Table-valued
functions list their values in bit-index order, so ``values[mask]`` is the
value of the subset encoded by ``mask``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

from .errors import InputError
from .rational import to_value

COVERAGE_UNIVERSE_CAP = 10**7


def popcount(mask: int) -> int:
    return mask.bit_count()


def members(mask: int) -> list[int]:
    """Element indices of ``mask`` in increasing order."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


@dataclass(frozen=True)
class GroundSet:
    n: int
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"ground set needs n >= 1, got {self.n}")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i}" for i in range(self.n)))
        else:
            object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != self.n:
            raise InputError(f"expected {self.n} labels, got {len(self.labels)}")
        if len(set(self.labels)) != self.n:
            raise InputError("labels must be distinct")

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def check(self, mask: int) -> int:
        if not isinstance(mask, int) or mask < 0 or mask >> self.n:
            raise InputError(f"subset {mask!r} is not a subset of a {self.n}-element ground set")
        return mask

    def complement(self, mask: int) -> int:
        return self.full & ~self.check(mask)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputError(f"unknown element label {label!r}") from None

    def subset(self, labels: Iterable[str]) -> int:
        return mask_of(self.index(x) for x in labels)

    def names(self, mask: int) -> list[str]:
        return [self.labels[i] for i in members(mask)]


# ---------------------------------------------------------------------------
# specifications


@dataclass(frozen=True)
class ExplicitTable:
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(to_value(v) for v in self.values))


@dataclass(frozen=True)
class Modular:
    weights: tuple[Fraction, ...]
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(to_value(w) for w in self.weights))
        object.__setattr__(self, "offset", to_value(self.offset))


@dataclass(frozen=True)
class Coverage:
    """Coverage function: value of S is the size of the union of its sets."""

    universe_size: int
    sets: tuple[frozenset[int], ...]
    bits: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0 <= self.universe_size <= COVERAGE_UNIVERSE_CAP:
            raise InputError(
                f"coverage universe size {self.universe_size} outside [0, {COVERAGE_UNIVERSE_CAP}]"
            )
        sets = tuple(frozenset(s) for s in self.sets)
        bits = []
        for j, s in enumerate(sets):
            for u in s:
                if not (isinstance(u, int) and 0 <= u < self.universe_size):
                    raise InputError(f"coverage set {j} contains {u!r}, outside the universe")
            bits.append(mask_of(s))
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "bits", tuple(bits))


@dataclass(frozen=True)
class Named:
    """Reference to a catalog instance; resolved by :func:`incdec.instances.build_named_instance`."""

    id: str
    params: tuple[tuple[str, Fraction], ...] = ()
    part: str | None = None


SetFunctionSpec = Union[ExplicitTable, Modular, Coverage, Named]


def spec_size(spec: SetFunctionSpec) -> int | None:
    """Number of ground elements implied by a spec (``None`` if unknown)."""
    if isinstance(spec, ExplicitTable):
        n = len(spec.values).bit_length() - 1
        return n if len(spec.values) == 1 << n else -1
    if isinstance(spec, Modular):
        return len(spec.weights)
    if isinstance(spec, Coverage):
        return len(spec.sets)
    return None


def validate_spec(spec: SetFunctionSpec, n: int) -> None:
    if isinstance(spec, Named):
        raise InputError(f"named spec {spec.id!r} must be resolved before evaluation")
    if isinstance(spec, ExplicitTable):
        if len(spec.values) != 1 << n:
            raise InputError(f"table has {len(spec.values)} values, expected 2^{n} = {1 << n}")
        return
    m = spec_size(spec)
    if m != n:
        raise InputError(f"{type(spec).__name__} spec covers {m} elements, ground set has {n}")


def raw_value(spec: SetFunctionSpec, mask: int) -> Fraction:
    if isinstance(spec, ExplicitTable):
        return spec.values[mask]
    if isinstance(spec, Modular):
        w = spec.weights
        return spec.offset + sum((w[i] for i in members(mask)), Fraction(0))
    if isinstance(spec, Coverage):
        u = 0
        bits = spec.bits
        i = 0
        while mask:
            if mask & 1:
                u |= bits[i]
            mask >>= 1
            i += 1
        return Fraction(u.bit_count())
    raise InputError(f"cannot evaluate {type(spec).__name__} spec directly")


def normalize_zero_at_empty(spec: SetFunctionSpec) -> SetFunctionSpec:
    """Shift ``spec`` so that it evaluates to zero on the empty set."""
    if isinstance(spec, ExplicitTable):
        base = spec.values[0]
        if base == 0:
            return spec
        return ExplicitTable(tuple(v - base for v in spec.values))
    if isinstance(spec, Modular):
        return spec if spec.offset == 0 else Modular(spec.weights, Fraction(0))
    if isinstance(spec, Coverage):
        return spec
    raise InputError(f"cannot normalize unresolved {type(spec).__name__} spec")


# ---------------------------------------------------------------------------
# oracles


class Oracle:
    """Memoized, pure evaluator of one set function over a ground set.

    With ``normalized=True`` every value is reported relative to the value of
    the empty set; :meth:`raw` always returns the unshifted value. The memo is
    a plain dict: concurrent readers may race to fill an entry, but they all
    store the same value, so results never depend on scheduling.
    """

    def __init__(self, spec: SetFunctionSpec, ground: GroundSet, normalized: bool = False):
        validate_spec(spec, ground.n)
        self.spec = spec
        self.ground = ground
        self.normalized = normalized
        self._cache: dict[int, Fraction] = {}
        self._base = raw_value(spec, 0) if normalized else Fraction(0)

    @property
    def n(self) -> int:
        return self.ground.n

    def raw(self, mask: int) -> Fraction:
        v = self._cache.get(mask)
        if v is None:
            self.ground.check(mask)
            v = raw_value(self.spec, mask)
            self._cache[mask] = v
        return v

    def eval(self, mask: int) -> Fraction:
        return self.raw(mask) - self._base

    __call__ = eval

    def marginal(self, e: int, mask: int) -> Fraction:
        """Gain of adding element ``e`` to ``mask`` (zero if already present)."""
        if not 0 <= e < self.n:
            raise InputError(f"element {e} outside ground set of size {self.n}")
        bit = 1 << e
        if mask & bit:
            self.ground.check(mask)
            return Fraction(0)
        return self.raw(mask | bit) - self.raw(mask)

    def marginal_set(self, t: int, mask: int) -> Fraction:
        return self.raw(t | mask) - self.raw(mask)

    def normalize(self) -> "Oracle":
        """Handle on the same function shifted to vanish on the empty set."""
        if self.normalized:
            return self
        return Oracle(self.spec, self.ground, normalized=True)

    def is_normalized(self) -> bool:
        return self.normalized or self.raw(0) == 0

    def table(self) -> list[Fraction]:
        """All 2^n values in bit-index order."""
        return [self.eval(m) for m in range(1 << self.n)]

    def __repr__(self):
        return f"Oracle({type(self.spec).__name__}, n={self.n}, normalized={self.normalized})"


def eval_oracle(oracle: Oracle, mask: int) -> Fraction:
    return oracle.eval(mask)


def marginal(oracle: Oracle, e: int, mask: int) -> Fraction:
    return oracle.marginal(e, mask)


def marginal_set(oracle: Oracle, t: int, mask: int) -> Fraction:
    oracle.ground.check(t)
    oracle.ground.check(mask)
    return oracle.marginal_set(t, mask)


class CombinedObjective:
    """``f(S) = h(S) + g(E \\ S)``, the incremental-decremental objective."""

    def __init__(self, g: Oracle, h: Oracle):
        if g.ground != h.ground:
            raise InputError("g and h must share the same ground set")
        self.g = g
        self.h = h
        self.ground = g.ground

    @property
    def n(self) -> int:
        return self.ground.n

    def eval(self, mask: int) -> Fraction:
        return self.h.eval(mask) + self.g.eval(self.ground.complement(mask))

    __call__ = eval

    def table(self) -> list[Fraction]:
        return [self.eval(m) for m in range(1 << self.n)]


def combine(g: Oracle, h: Oracle, normalize: bool = True) -> CombinedObjective:
    """Build the combined objective; by default both parts are normalized first."""
    if normalize:
        g, h = g.normalize(), h.normalize()
    return CombinedObjective(g, h)


Objective = Union[Oracle, CombinedObjective]

