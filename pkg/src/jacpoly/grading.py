"""Gradings by primitive integer directions.

A direction (u, v) assigns x^a y^b the weight u*a + v*b.  Leading forms,
homogeneous decompositions, and the counterclockwise comparison of
directions are all exact; weights of Puiseux terms are rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

from .errors import PreconditionError
from .exactalg import PuiseuxPoly

Rat = Fraction


@dataclass(frozen=True)
class Direction:
    u: int
    v: int

    def __post_init__(self):
        if not isinstance(self.u, int) or not isinstance(self.v, int):
            raise PreconditionError("direction components must be integers")
        if gcd(abs(self.u), abs(self.v)) != 1:
            raise PreconditionError("direction must be primitive")
        if self.u <= 0 and self.v <= 0:
            raise PreconditionError("direction needs a positive component")

    def weight(self, xexp, yexp) -> Fraction:
        return Fraction(self.u) * xexp + Fraction(self.v) * yexp

    def weight_point(self, p) -> Fraction:
        return self.weight(p[0], p[1])

    def __iter__(self):
        return iter((self.u, self.v))

    def __str__(self):
        return f"({self.u},{self.v})"


def w_deg(f: PuiseuxPoly, w: Direction) -> Optional[Fraction]:
    """Largest w-weight over the support; None for the zero polynomial."""
    if f.is_zero():
        return None
    return max(w.weight(xe, ye) for (xe, ye) in f.support())


def leading_form(f: PuiseuxPoly, w: Direction) -> PuiseuxPoly:
    """Sum of the terms of maximal w-weight."""
    if f.is_zero():
        raise PreconditionError("zero polynomial has no leading form")
    d = w_deg(f, w)
    terms = {
        (xe, ye): c for (xe, ye), c in f.items() if w.weight(xe, ye) == d
    }
    return PuiseuxPoly(terms, f.ring, _validated=True)


def graded_part(f: PuiseuxPoly, w: Direction, degree) -> PuiseuxPoly:
    """The w-homogeneous piece of the given degree (zero if absent)."""
    degree = Fraction(degree)
    terms = {
        (xe, ye): c
        for (xe, ye), c in f.items()
        if w.weight(xe, ye) == degree
    }
    return PuiseuxPoly(terms, f.ring, _validated=True)


def decompose(f: PuiseuxPoly, w: Direction) -> dict[Fraction, PuiseuxPoly]:
    """Split f into w-homogeneous parts keyed by exact degree."""
    buckets: dict[Fraction, dict] = {}
    for (xe, ye), c in f.items():
        buckets.setdefault(w.weight(xe, ye), {})[(xe, ye)] = c
    return {
        d: PuiseuxPoly(t, f.ring, _validated=True)
        for d, t in buckets.items()
    }


def _cross(a: Direction, b: Direction) -> int:
    return a.u * b.v - a.v * b.u


def _dot(a: Direction, b: Direction) -> int:
    return a.u * b.u + a.v * b.v


def _angle_ok(anchor: Direction, w: Direction) -> bool:
    """True when w lies in the half-open half circle [anchor, anchor+pi)."""
    c = _cross(anchor, w)
    if c > 0:
        return True
    return c == 0 and _dot(anchor, w) > 0


def direction_cmp(w1: Direction, w2: Direction,
                  interval_anchor: Direction) -> int:
    """Counterclockwise comparison within the half circle at the anchor.

    Returns -1, 0, or 1 as w1 precedes, equals, or follows w2.
    """
    for w in (w1, w2):
        if not _angle_ok(interval_anchor, w):
            raise PreconditionError(
                f"direction {w} is not within a half circle of the anchor"
            )
    if w1 == w2:
        return 0
    return -1 if _cross(w1, w2) > 0 else 1
