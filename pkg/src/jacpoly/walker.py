"""The decreasing-automorphism walk.

Starting from a pair (F, G) with F filling a rectangle and the innermost
polynomial Z of F, the walk repeatedly reads off the edge of the Newton
polygon at the tracked F-vertex, factors the edge polynomial over Q,
and substitutes y -> y + alpha * x^(-u/v) for a root alpha chosen to keep
the vertex-height ratio of Z against F from growing.  It stops when the
tracked Z-vertex is no longer strictly left of the current edge line,
and classifies the stopping configuration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Optional

from .errors import InvariantViolation, JacpolyError, PreconditionError
from .exactalg import PuiseuxPoly, jacobian, q12_ring, shift_substitute
from .genfactory import QTuple, f_generator
from .grading import Direction, leading_form, w_deg
from .polygeom import RatPoint, en_vertex, newton_polygon

# walk outcomes
STAR_FAILED_CASE1 = "star_failed_case1"  # Z-vertex on the edge line
STAR_FAILED_CASE2 = "star_failed_case2"  # Z-vertex strictly right of it
ROOT_IRRATIONAL = "root_irrational"
MAX_STEPS_EXCEEDED = "max_steps_exceeded"
ZERO_INNERMOST = "zero_innermost"
DEGENERATE_EDGE = "degenerate_edge"


class RootlessEdgeError(JacpolyError):
    """The edge polynomial of F has no rational root to walk along."""

    def __init__(self, remnant):
        super().__init__("no rational root on the active edge")
        self.remnant = tuple(remnant)


class DegenerateEdgeError(JacpolyError):
    """The active edge gives no progress: it meets the origin level or its
    form is a single monomial, so the only substitution is the identity."""


@dataclass(frozen=True)
class FactoredLeadingForm:
    """A graded edge form written, with T = x^(u/v) y, as

        c * x^pref * T^t_valuation * prod (T - a_i)^m_i * remnant(T)

    where the a_i are the distinct nonzero rational roots and the monic
    remnant has no rational roots.  A pure monomial has empty roots."""

    c: Fraction
    x_prefactor_exp: Fraction
    t_valuation: int
    roots: tuple[tuple[Fraction, int], ...]
    remnant: tuple[Fraction, ...]  # ascending coefficients in T, monic

    def all_roots(self) -> tuple[tuple[Fraction, int], ...]:
        """Roots including the zero root carried by the valuation."""
        if self.t_valuation:
            return ((Fraction(0), self.t_valuation),) + self.roots
        return self.roots

    def reconstruct_onevar(self) -> list[Fraction]:
        """Coefficients in T of c * T^val * prod (T - a_i)^m_i * remnant."""
        poly = [Fraction(0)] * self.t_valuation + [self.c]
        for alpha, mult in self.roots:
            for _ in range(mult):
                poly = _ov_shift_mul(poly, -alpha)
        rem = list(self.remnant)
        out = [Fraction(0)] * (len(poly) + len(rem) - 1)
        for i, a in enumerate(poly):
            for j, b in enumerate(rem):
                out[i + j] += a * b
        return out


def _ov_shift_mul(poly: list[Fraction], c0: Fraction) -> list[Fraction]:
    """Multiply an ascending coefficient list by (T + c0)."""
    out = [Fraction(0)] * (len(poly) + 1)
    for i, a in enumerate(poly):
        out[i] += a * c0
        out[i + 1] += a
    return out


def _synthetic_divide(work: list[Fraction],
                      alpha: Fraction) -> Optional[list[Fraction]]:
    """Quotient of work by (T - alpha), or None when alpha is not a root."""
    quot = [Fraction(0)] * (len(work) - 1)
    carry = Fraction(0)
    for i in range(len(work) - 1, 0, -1):
        carry = work[i] + carry * alpha
        quot[i - 1] = carry
    if work[0] + carry * alpha != 0:
        return None
    return quot


def _rational_roots(coeffs: list[Fraction]):
    """(valuation, nonzero rational roots with multiplicity, monic
    root-free remnant) of an ascending coefficient list.

    The zero-root multiplicity is the low-end valuation; the other roots
    come from the divisor candidates of the primitive integer form.
    """
    low = 0
    while low < len(coeffs) and coeffs[low] == 0:
        low += 1
    if low == len(coeffs):
        raise PreconditionError("zero polynomial has no factorization")
    work = [c / coeffs[-1] for c in coeffs[low:]]  # monic
    roots = []
    while len(work) > 1:
        den = 1
        for c in work:
            den = lcm(den, c.denominator)
        ints = [int(c * den) for c in work]
        found = None
        for p in _divisors(abs(ints[0])):
            for q in _divisors(abs(ints[-1])):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if _eval_poly(work, cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        mult = 0
        while len(work) > 1:
            quot = _synthetic_divide(work, found)
            if quot is None:
                break
            work = quot
            mult += 1
        roots.append((found, mult))
    roots.sort(key=lambda rm: rm[0])
    return low, roots, work


def _divisors(v: int) -> list[int]:
    if v == 0:
        return [1]
    out = []
    d = 1
    while d * d <= v:
        if v % d == 0:
            out.append(d)
            out.append(v // d)
        d += 1
    return sorted(set(out))


def _eval_poly(coeffs: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def factor_leading_form(f: PuiseuxPoly, w: Direction) -> FactoredLeadingForm:
    """Factor the w-leading form through the substitution T = x^(u/v) y.

    Requires w = (v, -u) with u >= 0 and v > 0; the form collapses to a
    one-variable polynomial in T whose rational roots drive the decreasing
    substitutions.  Irrational factors stay in the remnant.
    """
    if f.is_zero():
        raise PreconditionError("cannot factor the zero polynomial")
    v, mu = w.u, w.v
    u = -mu
    if v <= 0 or u < 0:
        raise PreconditionError("direction must have v > 0 and u >= 0")
    lf = leading_form(f, w)
    deg = w_deg(f, w)
    pref = Fraction(deg, v)
    coeff_map: dict[int, Fraction] = {}
    for (xe, ye), c in lf.items():
        if ye.denominator != 1 or ye < 0:
            raise PreconditionError("y-exponents must be integers >= 0")
        coeff_map[int(ye)] = c
    top = max(coeff_map)
    coeffs = [coeff_map.get(i, Fraction(0)) for i in range(top + 1)]
    lead = coeffs[-1]
    val, roots, remnant = _rational_roots(coeffs)
    return FactoredLeadingForm(
        c=lead,
        x_prefactor_exp=pref,
        t_valuation=val,
        roots=tuple(roots),
        remnant=tuple(remnant),
    )


def next_direction(F: PuiseuxPoly, vF) -> Direction:
    """Outward normal of the polygon edge arriving at vF from below.

    Of the two edges meeting at vF, this is the one whose outward normal
    is counterclockwise-smaller; for a segment polygon it is the unique
    rightward normal.
    """
    vF = RatPoint(Fraction(vF[0]), Fraction(vF[1]))
    P = newton_polygon(F, augmented=True)
    verts = P.vertices
    if vF not in verts:
        raise PreconditionError(f"{tuple(vF)} is not a vertex of the polygon")
    if P.is_point():
        raise PreconditionError("a single point has no edge direction")
    if P.is_segment():
        other = verts[0] if verts[1] == vF else verts[1]
        dx, dy = vF.x - other.x, vF.y - other.y
        return _primitive_normal(dx, dy)
    i = verts.index(vF)
    prev = verts[i - 1]
    dx, dy = vF.x - prev.x, vF.y - prev.y
    return _primitive_normal(dx, dy)


def _primitive_normal(dx: Fraction, dy: Fraction) -> Direction:
    # outward normal of a counterclockwise edge step (dx, dy)
    nx, ny = dy, -dx
    den = lcm(nx.denominator, ny.denominator)
    ax, ay = int(nx * den), int(ny * den)
    g = gcd(abs(ax), abs(ay))
    ax, ay = ax // g, ay // g
    if ax < 0 or (ax == 0 and ay < 0):
        ax, ay = -ax, -ay
    return Direction(ax, ay)


@dataclass
class WalkState:
    """One station of the walk.

    Tracks the current images of F, G, Z, the grid denominator p, the two
    vertices, the probing direction, and whether the Z-vertex is still
    strictly left of the direction line through the F-vertex.
    """

    j: int
    F: PuiseuxPoly
    G: Optional[PuiseuxPoly]
    Z: PuiseuxPoly
    p: int
    vF: RatPoint
    vZ: RatPoint
    w: Direction
    star_holds: bool
    vG: Optional[RatPoint] = None
    vg_ratio_ok: Optional[bool] = None


@dataclass
class WalkTrace:
    states: list[WalkState]
    outcome: str
    case_direction: Optional[Direction] = None
    degree_certificate: Optional[Fraction] = None
    leading_jacobian_nonzero: Optional[bool] = None
    remnant: Optional[tuple[Fraction, ...]] = None
    orientation: str = "en"


def star_condition(state: WalkState) -> bool:
    """Whether the Z-vertex lies strictly left of the w-line through the
    F-vertex."""
    return state.w.weight_point(state.vZ) < state.w.weight_point(state.vF)


def _face_lower_vertex(poly: PuiseuxPoly, w: Direction) -> RatPoint:
    P = newton_polygon(poly, augmented=True)
    face = P.face(w)
    return min(face, key=lambda p: p.y)


def _state_from(j: int, F, G, Z, p: int, vF: RatPoint, vZ: RatPoint,
                qt: Optional[QTuple],
                vG: Optional[RatPoint]) -> WalkState:
    w = next_direction(F, vF)
    st = WalkState(
        j=j, F=F, G=G, Z=Z, p=p, vF=vF, vZ=vZ, w=w, star_holds=False
    )
    st.star_holds = star_condition(st)
    if vG is not None and qt is not None:
        st.vG = vG
        ratio = Fraction(qt.b, qt.a)
        st.vg_ratio_ok = (
            vG.x == ratio * vF.x and vG.y == ratio * vF.y
        )
    return st


def walk_step(state: WalkState, root_choice: Optional[int] = None,
              qt: Optional[QTuple] = None) -> WalkState:
    """Apply one decreasing substitution and rebuild the tracked data.

    The root is picked among the rational roots of the F-edge polynomial
    to minimize the multiplicity ratio of Z against F (ties broken by the
    smaller root); ``root_choice`` overrides the choice by index.
    """
    if not state.star_holds:
        raise PreconditionError("the walk already stopped at this state")
    w = state.w
    v, u = w.u, -w.v
    fdeg = w_deg(state.F, w)
    if fdeg is None or fdeg <= 0:
        raise DegenerateEdgeError("active edge at or below the origin level")
    fact_F = factor_leading_form(state.F, w)
    candidates = fact_F.all_roots()
    if not candidates:
        raise RootlessEdgeError(fact_F.remnant)
    if not fact_F.roots and len(fact_F.remnant) == 1:
        # a pure monomial form: the zero root is an identity substitution
        raise DegenerateEdgeError("monomial edge form cannot advance")
    fact_Z = factor_leading_form(state.Z, w)
    z_mult = dict(fact_Z.all_roots())
    if root_choice is None:
        choices = sorted(
            candidates,
            key=lambda rm: (Fraction(z_mult.get(rm[0], 0), rm[1]), rm[0]),
        )
        alpha, mult = choices[0]
    else:
        alpha, mult = candidates[root_choice]
    p_new = lcm(v, state.p)
    F1 = shift_substitute(state.F, alpha, u, v)
    Z1 = shift_substitute(state.Z, alpha, u, v)
    G1 = (
        shift_substitute(state.G, alpha, u, v)
        if state.G is not None
        else None
    )
    vF1 = _face_lower_vertex(F1, w)
    vZ1 = _face_lower_vertex(Z1, w)
    vG1 = _face_lower_vertex(G1, w) if G1 is not None else None
    if vF1.y != mult:
        raise InvariantViolation(
            "F-vertex height disagrees with the chosen multiplicity",
            payload={"vertex": tuple(vF1), "mult": mult},
        )
    zdeg = w_deg(Z1, w)
    if zdeg is not None and zdeg > 0 and vZ1.y != z_mult.get(alpha, 0):
        raise InvariantViolation(
            "Z-vertex height disagrees with the root multiplicity",
            payload={"vertex": tuple(vZ1)},
        )
    new = _state_from(state.j + 1, F1, G1, Z1, p_new, vF1, vZ1, qt, vG1)
    _check_ratio_monotone(state, new)
    return new


def _check_ratio_monotone(old: WalkState, new: WalkState):
    if old.vF.y == 0 or new.vF.y == 0:
        raise InvariantViolation(
            "F-vertex fell to the x-axis during the walk",
            payload={"j": new.j},
        )
    before = Fraction(old.vZ.y) / old.vF.y
    after = Fraction(new.vZ.y) / new.vF.y
    if after > before:
        raise InvariantViolation(
            "vertex height ratio increased along the step",
            payload={"j": new.j, "before": before, "after": after},
        )


def run_walk(F: PuiseuxPoly, G: PuiseuxPoly, qt: QTuple,
             orientation: str = "en", max_steps: int = 500) -> WalkTrace:
    """Run the walk for a pair (F, G) and classify how it stops.

    ``orientation`` selects the frame: "en" tracks the east-north vertex
    (needs m <= n), "en-mirror" the same with m >= n, and "ne" swaps the
    axes first.  The innermost polynomial is computed up front; when it
    vanishes the walk is not entered.

    On star failure the terminal state is classified: when the Z-vertex is
    on the edge line and the leading forms have nonzero Jacobian bracket,
    the w-degree of [F, G] is certified as deg_w F + deg_w G - deg_w(xy).
    """
    if orientation not in ("en", "en-mirror", "ne"):
        raise PreconditionError("orientation must be en, en-mirror, or ne")
    if orientation == "en" and qt.m > qt.n:
        raise PreconditionError("the en walk needs m <= n")
    if orientation == "en-mirror" and qt.m < qt.n:
        raise PreconditionError("the mirrored walk needs m >= n")
    if orientation == "ne":
        # track the north-east vertex by swapping the axes up front
        if qt.m > qt.n:
            raise PreconditionError("the ne walk needs m <= n")
        F = F.transpose()
        G = G.transpose()
        qt = QTuple(qt.a, qt.b, qt.n, qt.m)
    gen = f_generator(F, qt)
    Z = gen.Z
    if Z.is_zero():
        return WalkTrace(states=[], outcome=ZERO_INNERMOST,
                         orientation=orientation)
    ring = q12_ring(1)
    F0 = F.with_ring(ring)
    G0 = G.with_ring(ring)
    Z0 = Z.with_ring(ring)
    vF0 = en_vertex(newton_polygon(F0))
    vZ0 = en_vertex(newton_polygon(Z0))
    vG0 = en_vertex(newton_polygon(G0))
    state = _state_from(0, F0, G0, Z0, 1, vF0, vZ0, qt, vG0)
    states = [state]
    while state.star_holds:
        if state.j >= max_steps:
            return WalkTrace(states=states, outcome=MAX_STEPS_EXCEEDED,
                             orientation=orientation)
        try:
            state = walk_step(state, qt=qt)
        except RootlessEdgeError as stop:
            return WalkTrace(
                states=states,
                outcome=ROOT_IRRATIONAL,
                remnant=stop.remnant,
                orientation=orientation,
            )
        except DegenerateEdgeError:
            return WalkTrace(
                states=states,
                outcome=DEGENERATE_EDGE,
                orientation=orientation,
            )
        states.append(state)

    w = state.w
    on_line = w.weight_point(state.vZ) == w.weight_point(state.vF)
    trace = WalkTrace(
        states=states,
        outcome=STAR_FAILED_CASE1 if on_line else STAR_FAILED_CASE2,
        case_direction=w,
        orientation=orientation,
    )
    if on_line and state.G is not None:
        lead_jac = jacobian(
            leading_form(state.F, w), leading_form(state.G, w)
        )
        trace.leading_jacobian_nonzero = not lead_jac.is_zero()
        if trace.leading_jacobian_nonzero:
            trace.degree_certificate = (
                w_deg(state.F, w) + w_deg(state.G, w) - (w.u + w.v)
            )
    return trace
