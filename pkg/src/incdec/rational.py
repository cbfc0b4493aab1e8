"""Exact rational scalars and their text encoding.

Values are plain :class:`fractions.Fraction` objects. An infinite ratio is
represented by ``INF`` (a float), which compares correctly against fractions.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

from .errors import InputError

Value = Fraction
Ratio = Union[Fraction, float]

INF = math.inf


def to_value(x) -> Fraction:
    """Coerce ``x`` (int, Fraction, or ``"p/q"`` string) to an exact value.

    Floats are rejected: every function value must be exact.
    """
    if isinstance(x, bool):
        raise InputError(f"not a rational value: {x!r}")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"not a rational value: {x!r}") from None
    raise InputError(f"not a rational value: {x!r} (use an integer or a 'p/q' string)")


def fmt(x: Ratio) -> str:
    """Canonical text form: ``"5"``, ``"5/4"``, or ``"inf"``."""
    if isinstance(x, float):
        if x == INF:
            return "inf"
        raise TypeError(f"unexpected float {x!r}")
    return str(Fraction(x))


def parse_ratio(s: str) -> Ratio:
    return INF if s == "inf" else to_value(s)


def ratio(opt: Fraction, alg: Fraction) -> Ratio:
    """``opt / alg`` with the conventions 0/0 = 1 and positive/0 = inf."""
    if alg > 0:
        return Fraction(opt) / alg
    if opt <= 0:
        return Fraction(1)
    return INF
