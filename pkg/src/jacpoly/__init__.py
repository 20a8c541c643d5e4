"""jacpoly: exact Newton-polygon and polynomial-pair analysis toolkit."""

from .exactalg import (
    PuiseuxPoly,
    RingTag,
    TruncSeries,
    jacobian,
    parse,
    plain_ring,
    q12_ring,
    q14_ring,
    shift_substitute,
    to_text,
)

__all__ = [
    "PuiseuxPoly",
    "RingTag",
    "TruncSeries",
    "jacobian",
    "parse",
    "plain_ring",
    "q12_ring",
    "q14_ring",
    "shift_substitute",
    "to_text",
]

__version__ = "0.1.0"
