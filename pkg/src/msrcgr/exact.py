"""Exact rational substrate: the q-grid, snapped grid rounding, midpoints.

Rationals are :class:`fractions.Fraction` values, which are always stored in
lowest terms with a positive denominator and compare exactly.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

from .errors import InvalidAlphabetError, OutOfRangeError

Rational = Fraction

SNAP_EPS = 1e-12


class Point2(NamedTuple):
    x: Fraction
    y: Fraction

    def to_float(self) -> tuple[float, float]:
        return float(self.x), float(self.y)


ORIGIN = Point2(Fraction(0), Fraction(0))


def grid_modulus(m: int) -> int:
    """Smallest power of two that is >= 4*m."""
    if m < 1:
        raise InvalidAlphabetError(f"alphabet size must be >= 1, got {m}")
    return 1 << (4 * m - 1).bit_length()


def snap_round_q(x: float, q: int) -> Fraction:
    """Floor ``x`` onto the q-grid, i.e. ``floor(q*x)/q``.

    Values within ``SNAP_EPS`` of an integer are first replaced by that
    integer so trig noise such as ``cos(3*pi/2) ~ -1.8e-16`` lands on 0
    rather than ``-1/q``.
    """
    if not math.isfinite(x) or abs(x) > 1 + SNAP_EPS:
        raise OutOfRangeError(f"value {x!r} outside [-1, 1]")
    nearest = round(x)
    if abs(x - nearest) <= SNAP_EPS:
        x = float(nearest)
    return Fraction(math.floor(q * x), q)


def _half_sum(a: Fraction, b: Fraction) -> Fraction:
    # single normalisation instead of add-then-halve
    da, db = a.denominator, b.denominator
    return Fraction(a.numerator * db + b.numerator * da, 2 * da * db)


def midpoint(a: Point2, b: Point2) -> Point2:
    return Point2(_half_sum(a.x, b.x), _half_sum(a.y, b.y))
