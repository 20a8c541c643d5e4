"""Corner-ordered recursive solving: pre-generators, functional
decomposition, generators, and innermost polynomials.

The central device is a total order on the grid points of the corner
rectangle induced by the functional x + sqrt(2)*y, compared exactly in
Q[sqrt(2)].  Solving coefficients along that order makes every defining
equation linear in the next unknown.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from typing import Optional, Sequence

from .errors import PreconditionError, StructuralError
from .exactalg import PuiseuxPoly, free_ring, q12_ring
from .grading import Direction, graded_part
from .polygeom import (
    RectMembership,
    RegionR,
    en_vertex,
    ne_vertex,
    newton_polygon,
    rect_membership,
    rect_polygon,
    region_R_contains,
)


@dataclass(frozen=True)
class QTuple:
    """Admissible parameter tuple: a | m, a | n, gcd(a, b) = 1, 2 <= a < b."""

    a: int
    b: int
    m: int
    n: int

    def __post_init__(self):
        if min(self.a, self.b, self.m, self.n) <= 0:
            raise PreconditionError("tuple entries must be positive")
        if not (2 <= self.a < self.b) or gcd(self.a, self.b) != 1:
            raise PreconditionError("need gcd(a,b) = 1 and 2 <= a < b")
        if self.m % self.a or self.n % self.a:
            raise PreconditionError("a must divide both m and n")


@dataclass(frozen=True)
class Tschirnhausen:
    """Monic one-variable polynomial with vanishing subleading coefficient.

    Represents z^k + e_{k-2} z^{k-2} + ... + e_0; ``coeffs`` stores
    (e_0, ..., e_{k-2}) and is empty for k = 1.
    """

    degree: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.degree < 1:
            raise PreconditionError("degree must be positive")
        expected = self.degree - 1
        if len(self.coeffs) != expected:
            raise PreconditionError(
                f"need exactly {expected} coefficients e_0..e_{{k-2}}"
            )
        object.__setattr__(
            self, "coeffs", tuple(Fraction(c) for c in self.coeffs)
        )

    def full_coeffs(self) -> list[Fraction]:
        """Ascending coefficient list of length degree + 1."""
        out = list(self.coeffs) + [Fraction(0), Fraction(1)]
        return out

    def apply(self, W: PuiseuxPoly) -> PuiseuxPoly:
        coeffs = self.full_coeffs()
        result = PuiseuxPoly.constant(coeffs[-1], W.ring)
        for c in reversed(coeffs[:-1]):
            result = result * W + c
        return result

    def compose(self, inner: "Tschirnhausen") -> "Tschirnhausen":
        outer = self.full_coeffs()
        composed = _compose_coeffs(outer, inner.full_coeffs())
        return tschirnhausen_from_coeffs(composed)

    def is_identity(self) -> bool:
        return self.degree == 1


def tschirnhausen_from_coeffs(coeffs: Sequence[Fraction]) -> Tschirnhausen:
    coeffs = [Fraction(c) for c in coeffs]
    if len(coeffs) < 2 or coeffs[-1] != 1:
        raise PreconditionError("need a monic polynomial of degree >= 1")
    k = len(coeffs) - 1
    if coeffs[-2] != 0:
        raise PreconditionError("subleading coefficient must vanish")
    return Tschirnhausen(k, tuple(coeffs[: k - 1]))


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _compose_coeffs(outer: Sequence[Fraction],
                    inner: Sequence[Fraction]) -> list[Fraction]:
    result = [Fraction(outer[-1])]
    for c in reversed(outer[:-1]):
        result = _poly_mul(result, list(inner))
        result[0] += c
    return result


# -- the corner order ---------------------------------------------------


def _cmp_plus_sqrt2(A: Fraction, B: Fraction) -> int:
    """Sign of A - sqrt(2)*B, computed exactly."""
    if B == 0:
        return (A > 0) - (A < 0)
    if A == 0:
        return -1 if B > 0 else 1
    if A > 0 and B < 0:
        return 1
    if A < 0 and B > 0:
        return -1
    diff = A * A - 2 * B * B
    sign = (diff > 0) - (diff < 0)
    return sign if A > 0 else -sign


def _functional_cmp(p: tuple[Fraction, Fraction],
                    q: tuple[Fraction, Fraction]) -> int:
    """Compare p, q by the value of x + sqrt(2)*y."""
    return _cmp_plus_sqrt2(p[0] - q[0], q[1] - p[1])


def corner_order(m: int, n: int, a: int,
                 xden: int = 1) -> list[tuple[Fraction, Fraction]]:
    """Grid points of the corner rectangle, strictly decreasing under
    x + sqrt(2)*y.

    The grid is {0, 1/xden, ..., m/a} x {0, 1, ..., n/a}; the first point
    is always the corner (m/a, n/a).  Irrationality of sqrt(2) makes the
    order injective on rational points.
    """
    if a < 1 or m % a or n % a:
        raise PreconditionError("a must divide both m and n")
    if xden < 1:
        raise PreconditionError("grid denominator must be positive")
    mx, ny = m // a, n // a
    points = [
        (Fraction(i, xden), Fraction(j))
        for i in range(mx * xden + 1)
        for j in range(ny + 1)
    ]
    points.sort(key=functools.cmp_to_key(_functional_cmp), reverse=True)
    return points


# -- approximate-root solving -------------------------------------------


def _rational_nth_root(c: Fraction, k: int) -> Optional[Fraction]:
    """Exact k-th root in Q, preferring the positive branch; None if absent."""
    if k == 1:
        return c
    if c == 0:
        return Fraction(0)
    if c < 0 and k % 2 == 0:
        return None
    sign = -1 if c < 0 else 1
    num = _int_nth_root(abs(c.numerator), k)
    den = _int_nth_root(c.denominator, k)
    if num is None or den is None:
        return None
    return Fraction(sign * num, den)


def _int_nth_root(v: int, k: int) -> Optional[int]:
    if v == 0:
        return 0
    lo, hi = 1, 1
    while hi ** k < v:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** k < v:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo ** k == v else None


def _solve_corner_root(F: PuiseuxPoly, exponent: int,
                       points: list[tuple[Fraction, Fraction]],
                       corner_coeff: Fraction,
                       ring=None) -> tuple[PuiseuxPoly, list[PuiseuxPoly]]:
    """Solve W on the given grid so F - W^exponent misses the translated
    corner rectangle; returns W and the cached powers W^0..W^exponent.

    Each grid point contributes one equation that is linear in the next
    coefficient because the points are totally ordered by a linear
    functional.
    """
    z1 = points[0]
    if ring is None:
        ring = F.ring
    W = PuiseuxPoly.monomial(corner_coeff, z1[0], z1[1], ring)
    pows = [PuiseuxPoly.constant(1, ring)]
    for j in range(1, exponent + 1):
        pows.append(pows[-1] * W)
    lead = exponent * corner_coeff ** (exponent - 1)
    for z in points[1:]:
        target = (
            (exponent - 1) * z1[0] + z[0],
            (exponent - 1) * z1[1] + z[1],
        )
        resid = F.coefficient(*target) - pows[exponent].coefficient(*target)
        if resid == 0:
            continue
        q = resid / lead
        mono = PuiseuxPoly.monomial(q, z[0], z[1], ring)
        # update all cached powers of W after W += mono
        new_pows = [pows[0]]
        mono_pow = PuiseuxPoly.constant(1, ring)
        mono_pows = [mono_pow]
        for i in range(1, exponent + 1):
            mono_pow = mono_pow * mono
            mono_pows.append(mono_pow)
        for j in range(1, exponent + 1):
            acc = pows[j]
            for i in range(1, j + 1):
                acc = acc + pows[j - i] * mono_pows[i] * comb(j, i)
            new_pows.append(acc)
        pows = new_pows
        W = W + mono
    return W, pows


def pre_generator(F: PuiseuxPoly, a: int, xden: int = 1) -> PuiseuxPoly:
    """The unique corner-rectangle polynomial Q with supp(F - Q^a)
    avoiding the translated corner region.

    The input needs a unit coefficient at its degree corner (m, n) with
    a | m and a | n; fractional x-exponents with denominator dividing
    ``xden`` are admitted, in which case Q is solved on the refined grid.
    """
    if F.is_zero():
        raise PreconditionError("input polynomial is zero")
    if a < 1:
        raise PreconditionError("a must be a positive integer")
    mf, nf = F.deg_x(), F.deg_y()
    if mf is None or mf.denominator != 1 or nf.denominator != 1:
        raise PreconditionError("degrees must be integers")
    m, n = int(mf), int(nf)
    if m % a or n % a:
        raise PreconditionError("a must divide both degrees")
    if F.coefficient(m, n) != 1:
        raise PreconditionError("corner coefficient must be 1")
    xd, yd = F.exponent_denominators()
    if xden % xd or yd != 1:
        raise PreconditionError(
            "grid denominator must admit the input's exponents"
        )
    points = corner_order(m, n, a, xden)
    work_ring = F.ring.join(q12_ring(xden)) if xden > 1 else F.ring
    Q, pows = _solve_corner_root(F, a, points, Fraction(1), ring=work_ring)
    z1 = points[0]
    diff = F - pows[a]
    for z in points:
        target = ((a - 1) * z1[0] + z[0], (a - 1) * z1[1] + z[1])
        if diff.coefficient(*target) != 0:
            raise StructuralError(
                f"residual support at {target} after corner solving"
            )
    return Q


def inner_poly(F: PuiseuxPoly, a: int, xden: int = 1) -> PuiseuxPoly:
    """F minus the a-th power of its pre-generator."""
    Q = pre_generator(F, a, xden=xden)
    return F - Q ** a


# -- functional decomposition -------------------------------------------


def _integer_degrees(f: PuiseuxPoly) -> tuple[int, int]:
    mf, nf = f.deg_x(), f.deg_y()
    if mf.denominator != 1 or nf.denominator != 1 or mf < 0 or nf < 0:
        raise PreconditionError("decomposition needs plain integer exponents")
    return int(mf), int(nf)


def _divisors_desc(v: int) -> list[int]:
    out = [d for d in range(2, v + 1) if v % d == 0]
    return out[::-1]


def _try_delta(f: PuiseuxPoly, delta: int, M: int, N: int,
               corner: Fraction) -> Optional[tuple[PuiseuxPoly,
                                                   list[Fraction]]]:
    """Attempt f = W^delta + e_{delta-2} W^{delta-2} + ... + e_0 exactly.

    Returns (W, [e_0..e_{delta-2}]) or None.  W's corner coefficient is the
    positive rational delta-th root of f's corner coefficient.
    """
    rho = _rational_nth_root(corner, delta)
    if rho is None or rho == 0:
        return None
    points = corner_order(M, N, delta)
    W, pows = _solve_corner_root(f, delta, points, rho)
    rem = f - pows[delta]
    e = [Fraction(0)] * max(delta - 1, 0)
    for j in range(delta - 2, -1, -1):
        px = Fraction(j * M, delta)
        py = Fraction(j * N, delta)
        ej = rem.coefficient(px, py) / rho ** j
        if ej != 0:
            rem = rem - pows[j] * ej
        e[j] = ej
    if rem.is_zero():
        return W, e
    return None


def decompose_univariate(
    f: PuiseuxPoly,
) -> tuple[PuiseuxPoly, Tschirnhausen]:
    """Deepest exact decomposition f = alpha(W) with alpha Tschirnhausen.

    Tries candidate degrees from the corner data largest-first; a candidate
    is accepted only when the residual vanishes identically.  When no
    candidate of degree >= 2 works, f itself is returned with alpha = z,
    and f is principal over Q in the operational sense.
    """
    if f.is_constant():
        raise PreconditionError("cannot decompose a constant")
    identity = Tschirnhausen(1, ())
    M, N = _integer_degrees(f)
    corner = f.coefficient(M, N)
    if corner == 0:
        return f, identity
    for delta in _divisors_desc(gcd(M, N)):
        hit = _try_delta(f, delta, M, N, corner)
        if hit is None:
            continue
        W, e = hit
        alpha = Tschirnhausen(delta, tuple(e))
        W_deep, alpha_inner = decompose_univariate(W)
        if alpha_inner.is_identity():
            return W, alpha
        return W_deep, alpha.compose(alpha_inner)
    return f, identity


# -- the generator bundle ------------------------------------------------


@dataclass(frozen=True)
class GeneratorResult:
    """Everything produced when splitting F along its generator.

    F = Q^a + sum_j e_j * WF^j + Z, with Q the pre-generator, Q = beta(WF),
    delta = deg(beta), inner = F - Q^a, and Z free of the corner-diagonal
    monomials x^(jm/(a*delta)) y^(jn/(a*delta)).
    """

    qt: QTuple
    Q: PuiseuxPoly
    delta: int
    beta: Tschirnhausen
    WF: PuiseuxPoly
    inner: PuiseuxPoly
    e_list: tuple[Fraction, ...]
    Z: PuiseuxPoly
    delta_successes: tuple[int, ...]
    wf_fills_rectangle: bool


def f_generator(F: PuiseuxPoly, qt: QTuple) -> GeneratorResult:
    """Compute the generator bundle for F at the given parameter tuple.

    F must lie in the closed rectangle class at (m, n) with corner
    coefficient 1.  A generator whose polygon falls short of the full
    scaled-down rectangle is reported through ``wf_fills_rectangle``
    rather than rejected.
    """
    if rect_membership(F, qt.m, qt.n) is RectMembership.NEITHER:
        raise PreconditionError("F must fit the rectangle at (m, n)")
    mf, nf = _integer_degrees(F)
    if (mf, nf) != (qt.m, qt.n):
        raise PreconditionError("tuple corner does not match the degrees")
    a = qt.a
    Q = pre_generator(F, a)
    inner = F - Q ** a
    WF, beta = decompose_univariate(Q)
    delta = beta.degree

    ma, na = qt.m // a, qt.n // a
    successes = tuple(
        d
        for d in _divisors_desc(gcd(ma, na))
        if _try_delta(Q, d, ma, na, Fraction(1)) is not None
    )
    if ma % delta or na % delta:
        raise StructuralError("decomposition degree misses the corner data")
    fills = rect_membership(WF, ma // delta, na // delta) is (
        RectMembership.IN_R
    )

    count = (a - 1) * delta
    e = [Fraction(0)] * count
    rem = inner
    wf_pows = [PuiseuxPoly.constant(1, F.ring)]
    for _ in range(count - 1):
        wf_pows.append(wf_pows[-1] * WF)
    for j in range(count - 1, -1, -1):
        px = Fraction(j * qt.m, a * delta)
        py = Fraction(j * qt.n, a * delta)
        ej = rem.coefficient(px, py)
        if ej != 0:
            rem = rem - wf_pows[j] * ej
        e[j] = ej
    Z = rem
    return GeneratorResult(
        qt=qt,
        Q=Q,
        delta=delta,
        beta=beta,
        WF=WF,
        inner=inner,
        e_list=tuple(e),
        Z=Z,
        delta_successes=successes,
        wf_fills_rectangle=fills,
    )


# -- certificates ---------------------------------------------------------


def _vertex_entry(poly: PuiseuxPoly, R: RegionR) -> dict:
    if poly.is_zero():
        return {
            "zero": True,
            "status": "degenerate: polynomial vanishes, containment holds",
        }
    P = newton_polygon(poly)
    en = en_vertex(P)
    ne = ne_vertex(P)
    entry = {
        "zero": False,
        "en": (en.x, en.y),
        "ne": (ne.x, ne.y),
        "en_eq_ne": en == ne,
        "at_origin": en == (0, 0),
        "in_region": region_R_contains(R, en),
    }
    if en.x > 0:
        entry["ratio_matches"] = (
            Fraction(en.y) / Fraction(en.x) == Fraction(R.n, R.m)
        )
    else:
        entry["ratio_matches"] = False
    if (
        en.x.denominator == 1
        and en.y.denominator == 1
        and en.x > 0
        and en.y > 0
    ):
        entry["rbar_member"] = rect_membership(
            poly, int(en.x), int(en.y)
        ) in (RectMembership.IN_R, RectMembership.IN_RBAR)
    else:
        entry["rbar_member"] = False
    return entry


def inner_vertex_report(F: PuiseuxPoly, qt: QTuple) -> dict:
    """Certificate checks on the vertices of the inner and innermost
    polygons: vertex coincidence, diagonal ratio, rectangle containment,
    and membership in the narrow region.

    When m > n the axes are swapped first; reported data lives in the
    swapped frame.
    """
    swapped = qt.m > qt.n
    if swapped:
        F = F.transpose()
        qt = QTuple(qt.a, qt.b, qt.n, qt.m)
    result = f_generator(F, qt)
    R = RegionR(qt.a, qt.b, qt.m, qt.n)
    report = {
        "swapped_axes": swapped,
        "delta": result.delta,
        "e": list(result.e_list),
        "innermost": _vertex_entry(result.Z, R),
        "inner": _vertex_entry(result.inner, R),
    }
    return report


def certify_T_membership(f: PuiseuxPoly, m: int, n: int, a: int,
                         b: int) -> dict:
    """Check the four defining conditions of the reduced class at (m, n, a).

    The conditions: the corner monomial is present and the polygon fits the
    rectangle; the top horizontal slice is exactly x^m y^n; the next slice
    vanishes; the top slice of the inner polynomial is a single monomial
    located in the narrow region (which depends on b).  Fractional
    x-exponents with a common denominator are admitted.
    """
    if m % a or n % a:
        raise PreconditionError("a must divide both m and n")
    R = RegionR(a, b, m, n)
    w01 = Direction(0, 1)
    corner = f.coefficient(m, n)
    contained = rect_polygon(m, n).contains_polygon(newton_polygon(f))
    checks: dict = {
        "corner_in_polygon": corner != 0 and contained,
        "top_slice_is_corner_monomial": graded_part(f, w01, n)
        == PuiseuxPoly.monomial(1, m, n, free_ring()),
        "subtop_slice_vanishes": graded_part(f, w01, n - 1).is_zero(),
    }
    if corner != 1:
        checks["inner_top_slice"] = "not computable: corner coefficient != 1"
        checks["ok"] = False
        return checks
    xd, _ = f.exponent_denominators()
    z = inner_poly(f, a, xden=xd)
    if z.is_zero():
        checks["inner_top_slice"] = "inner polynomial vanishes"
        checks["ok"] = bool(
            checks["corner_in_polygon"]
            and checks["top_slice_is_corner_monomial"]
            and checks["subtop_slice_vanishes"]
        )
        return checks
    s = z.deg_y()
    zs = graded_part(z, w01, s)
    if not zs.is_monomial():
        checks["inner_top_slice"] = False
    else:
        ((xe, ye), _c) = next(iter(zs.items()))
        checks["inner_top_slice"] = region_R_contains(R, (xe, ye))
    checks["ok"] = all(
        v is True for k, v in checks.items() if k != "ok"
    )
    return checks


def tschirnhausen_normalize(
    alpha_coeffs: Sequence[Fraction], W: PuiseuxPoly
) -> tuple[Tschirnhausen, PuiseuxPoly]:
    """Shift a monic composition so the subleading coefficient vanishes.

    Given monic alpha (ascending coefficients) and W with f = alpha(W),
    returns (alpha', W') with alpha' Tschirnhausen, alpha'(W') = alpha(W),
    using the mean-of-roots shift s = -(subleading)/k without factoring.
    """
    coeffs = [Fraction(c) for c in alpha_coeffs]
    if len(coeffs) < 2:
        raise PreconditionError("alpha must be nonconstant")
    if coeffs[-1] != 1:
        raise PreconditionError("alpha must be monic")
    k = len(coeffs) - 1
    s = -coeffs[-2] / k
    shifted = _compose_coeffs(coeffs, [s, Fraction(1)])
    alpha_p = tschirnhausen_from_coeffs(shifted)
    return alpha_p, W - PuiseuxPoly.constant(s, W.ring)
