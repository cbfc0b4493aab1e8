"""Double-greedy, plain greedy, the randomized two-order pair, and brute-force optima."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import CapacityError, InputError, PreconditionError
from .rational import Ratio, fmt, ratio
from .setfunc import GroundSet, Objective, Oracle, members

Ordering = tuple[int, ...]

OPT_PROFILE_CAP = 20
BEST_ORDERING_CAP = 16


def check_ordering(order: Sequence[int], n: int) -> Ordering:
    order = tuple(order)
    if sorted(order) != list(range(n)):
        raise InputError(f"{order!r} is not a permutation of 0..{n - 1}")
    return order


def ordering_names(order: Ordering, ground: GroundSet) -> list[str]:
    return [ground.labels[e] for e in order]


@dataclass(frozen=True)
class TieBreak:
    """How to choose among elements attaining the same maximum.

    ``kind`` is ``"min-index"``, ``"max-index"`` or ``"priority"``; for the
    latter ``ranking`` lists elements from most to least preferred.
    """

    kind: str = "min-index"
    ranking: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("min-index", "max-index", "priority"):
            raise InputError(f"unknown tie-break {self.kind!r}")
        if self.kind == "priority" and len(set(self.ranking)) != len(self.ranking):
            raise InputError("priority ranking lists an element twice")

    @classmethod
    def priority(cls, ranking: Sequence[int], n: int | None = None) -> "TieBreak":
        """Priority tie-break; with ``n`` given, unlisted elements follow in index order."""
        ranking = tuple(ranking)
        if n is not None:
            if any(not 0 <= e < n for e in ranking):
                raise InputError(f"priority ranking {ranking} has elements outside 0..{n - 1}")
            ranking += tuple(e for e in range(n) if e not in ranking)
        return cls("priority", ranking)

    @classmethod
    def parse(cls, text: str, ground: GroundSet) -> "TieBreak":
        """``"min-index" | "max-index" | "priority:e3,e1,..."`` (labels)."""
        text = text.strip()
        if text.startswith("priority:"):
            names = [x for x in text[len("priority:"):].split(",") if x]
            return cls.priority([ground.index(x) for x in names], ground.n)
        return cls(text)

    def pick(self, candidates: Sequence[int]) -> int:
        if self.kind == "min-index":
            return min(candidates)
        if self.kind == "max-index":
            return max(candidates)
        rank = {e: i for i, e in enumerate(self.ranking)}
        missing = [e for e in candidates if e not in rank]
        if missing:
            raise InputError(f"priority ranking does not cover element(s) {missing}")
        return min(candidates, key=rank.__getitem__)

    def describe(self, ground: GroundSet) -> str:
        if self.kind == "priority":
            return "priority:" + ",".join(ground.labels[e] for e in self.ranking)
        return self.kind


def _argmax(scores: dict[int, Fraction], tie: TieBreak) -> int:
    top = max(scores.values())
    return tie.pick([e for e, s in scores.items() if s == top])


def greedy_order(oracle: Oracle, tie: TieBreak = TieBreak()) -> Ordering:
    """Greedy incremental order: each step adds the element of largest marginal gain."""
    n = oracle.n
    chosen = 0
    order = []
    for _ in range(n):
        scores = {e: oracle.marginal(e, chosen) for e in range(n) if not chosen >> e & 1}
        e = _argmax(scores, tie)
        order.append(e)
        chosen |= 1 << e
    return tuple(order)


@dataclass(frozen=True)
class Step:
    i: int
    chosen: int
    side: str  # "H" or "G"
    phi: Fraction
    h_marginal: Fraction
    g_marginal: Fraction
    H: int
    G: int


@dataclass
class Trace:
    steps: list[Step] = field(default_factory=list)
    prec: str = "lt"

    def H(self, i: int) -> int:
        """Prefix set after iteration ``i`` (``i = 0`` gives the empty set)."""
        return self.steps[i - 1].H if i else 0

    def G(self, i: int) -> int:
        return self.steps[i - 1].G if i else 0

    def F(self, i: int) -> int:
        return self.H(i) | self.G(i)

    def phis(self) -> list[Fraction]:
        return [s.phi for s in self.steps]

    def to_json(self, ground: GroundSet) -> list[dict]:
        return [
            {
                "i": s.i,
                "chosen": ground.labels[s.chosen],
                "side": s.side,
                "phi": fmt(s.phi),
                "h_marginal": fmt(s.h_marginal),
                "g_marginal": fmt(s.g_marginal),
                "H": ground.names(s.H),
                "G": ground.names(s.G),
            }
            for s in self.steps
        ]


def precedes(prec: str, x: Fraction, y: Fraction) -> bool:
    if prec == "lt":
        return x < y
    if prec == "le":
        return x <= y
    raise InputError(f"comparison must be 'lt' or 'le', got {prec!r}")


def flip(prec: str) -> str:
    return {"lt": "le", "le": "lt"}[prec]


def _prepare_pair(g: Oracle, h: Oracle, auto_normalize: bool) -> tuple[Oracle, Oracle]:
    if g.ground != h.ground:
        raise InputError("g and h must share the same ground set")
    out = []
    for name, o in (("g", g), ("h", h)):
        if not o.is_normalized():
            if not auto_normalize:
                raise PreconditionError(f"{name} is not normalized ({name}(∅) ≠ 0); pass auto_normalize=True")
            o = o.normalize()
        out.append(o)
    return out[0], out[1]


def double_greedy(
    g: Oracle,
    h: Oracle,
    prec: str = "lt",
    tie: TieBreak = TieBreak(),
    auto_normalize: bool = False,
) -> tuple[Ordering, Trace]:
    """Build a prefix under ``h`` and a suffix under ``g`` simultaneously.

    Each iteration takes the remaining element with the largest
    ``max(g(e|G), h(e|H))``; it joins G (filling the ordering from the back)
    when ``h(e|H) prec g(e|G)`` and H (filling from the front) otherwise.
    """
    if prec not in ("lt", "le"):
        raise InputError(f"comparison must be 'lt' or 'le', got {prec!r}")
    g, h = _prepare_pair(g, h, auto_normalize)
    n = g.n
    order: list[int | None] = [None] * n
    H = G = 0
    trace = Trace(prec=prec)
    for i in range(1, n + 1):
        done = H | G
        hm, gm = {}, {}
        for e in range(n):
            if not done >> e & 1:
                hm[e] = h.marginal(e, H)
                gm[e] = g.marginal(e, G)
        e = _argmax({x: max(hm[x], gm[x]) for x in hm}, tie)
        if precedes(prec, hm[e], gm[e]):
            G |= 1 << e
            order[n - G.bit_count()] = e
            side = "G"
        else:
            H |= 1 << e
            order[H.bit_count() - 1] = e
            side = "H"
        trace.steps.append(Step(i, e, side, max(hm[e], gm[e]), hm[e], gm[e], H, G))
    return tuple(order), trace


@dataclass(frozen=True)
class RandomizedPair:
    """The two equally likely outcomes of the randomized algorithm."""

    order_h: Ordering
    order_g_reversed: Ordering

    def outcomes(self) -> tuple[Ordering, Ordering]:
        return self.order_h, self.order_g_reversed


def randomized_pair(g: Oracle, h: Oracle, tie: TieBreak = TieBreak()) -> RandomizedPair:
    """Greedy order for h, and the reversed greedy order for g."""
    if g.ground != h.ground:
        raise InputError("g and h must share the same ground set")
    return RandomizedPair(greedy_order(h, tie), tuple(reversed(greedy_order(g, tie))))


@dataclass
class OptProfile:
    """``values[k]`` is the best value over k-subsets, attained by ``witnesses[k]``."""

    values: list[Fraction]
    witnesses: list[int]

    @property
    def n(self) -> int:
        return len(self.values) - 1


def opt_profile(objective: Objective, cap: int = OPT_PROFILE_CAP) -> OptProfile:
    """Exact ``OPT_k`` for every k by full enumeration.

    Works for a combined objective or a single incremental oracle. Among
    maximizers the witness is the lexicographically smallest sorted index tuple.
    """
    n = objective.n
    if n > cap:
        raise CapacityError("opt_profile", n, cap, "--opt-cap")
    best: list[tuple[Fraction, tuple[int, ...], int] | None] = [None] * (n + 1)
    for m in range(1 << n):
        k = m.bit_count()
        v = objective.eval(m)
        cur = best[k]
        if cur is None or v > cur[0] or (v == cur[0] and members(m) < list(cur[1])):
            best[k] = (v, tuple(members(m)), m)
    return OptProfile([b[0] for b in best], [b[2] for b in best])


def prefix_values(objective: Objective, order: Ordering) -> list[Fraction]:
    """``f(S_k)`` for k = 0..n."""
    out = [objective.eval(0)]
    s = 0
    for e in order:
        s |= 1 << e
        out.append(objective.eval(s))
    return out


def best_ordering(
    objective: Objective,
    opt: OptProfile | None = None,
    cap: int = BEST_ORDERING_CAP,
) -> tuple[Ordering, Ratio]:
    """Ordering minimizing ``max_k OPT_k / f(S_k)``, with the exact min-max ratio.

    The ratio of a prefix depends only on its set, so a dynamic program over
    subsets (cost of the best chain ending in S) replaces the n! enumeration.
    Among optimal orderings the one found by preferring the smallest last
    element at every step is returned.
    """
    n = objective.n
    if n > cap:
        raise CapacityError("best_ordering", n, cap, "--order-cap")
    if opt is None:
        opt = opt_profile(objective, cap=max(cap, OPT_PROFILE_CAP))
    size = 1 << n
    cost: list[Ratio] = [Fraction(0)] * size
    last = [-1] * size
    for m in range(1, size):
        r = ratio(opt.values[m.bit_count()], objective.eval(m))
        best_c, best_e = None, -1
        for e in members(m):
            c = cost[m ^ (1 << e)]
            if best_c is None or c < best_c:
                best_c, best_e = c, e
        cost[m] = max(best_c, r)
        last[m] = best_e
    order = []
    m = size - 1
    while m:
        e = last[m]
        order.append(e)
        m ^= 1 << e
    order.reverse()
    return tuple(order), cost[size - 1]

