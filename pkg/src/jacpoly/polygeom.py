"""Exact lattice and polygon geometry for polynomial supports.

Everything is computed over Q: convex hulls via monotone chain with exact
cross products, region tests via rational inequalities, areas via the
shoelace formula.  Degenerate polygons (a point, a segment) are first-class
values throughout.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import PreconditionError
from .exactalg import PuiseuxPoly


class RatPoint(NamedTuple):
    x: Fraction
    y: Fraction


def pt(x, y) -> RatPoint:
    return RatPoint(Fraction(x), Fraction(y))


def _cross(o: RatPoint, a: RatPoint, b: RatPoint) -> Fraction:
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


class ConvexPolygon:
    """Convex polygon with vertices in counterclockwise order.

    The vertex list starts at the lexicographically smallest vertex and
    contains no three collinear points.  A single point and a segment are
    stored with one and two vertices respectively.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices: Sequence[RatPoint]):
        self.vertices = tuple(vertices)

    @staticmethod
    def hull(points: Iterable[RatPoint]) -> "ConvexPolygon":
        pts = sorted(set(RatPoint(Fraction(p[0]), Fraction(p[1]))
                         for p in points))
        if not pts:
            raise PreconditionError("hull of an empty point set")
        if len(pts) == 1:
            return ConvexPolygon(pts)
        lower = []
        for p in pts:
            while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
                lower.pop()
            lower.append(p)
        upper = []
        for p in reversed(pts):
            while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
                upper.pop()
            upper.append(p)
        if len(lower) == 2 and len(upper) == 2:
            return ConvexPolygon(lower)  # degenerate: a segment
        return ConvexPolygon(lower[:-1] + upper[:-1])

    # -- basic queries -------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, ConvexPolygon)
            and self.vertices == other.vertices
        )

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        inner = ", ".join(f"({v.x},{v.y})" for v in self.vertices)
        return f"ConvexPolygon([{inner}])"

    def is_point(self) -> bool:
        return len(self.vertices) == 1

    def is_segment(self) -> bool:
        return len(self.vertices) == 2

    def edges(self) -> list[tuple[RatPoint, RatPoint]]:
        v = self.vertices
        if len(v) == 1:
            return []
        if len(v) == 2:
            return [(v[0], v[1])]
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def contains(self, p) -> bool:
        p = RatPoint(Fraction(p[0]), Fraction(p[1]))
        v = self.vertices
        if len(v) == 1:
            return p == v[0]
        if len(v) == 2:
            if _cross(v[0], v[1], p) != 0:
                return False
            lo, hi = min(v), max(v)
            return lo <= p <= hi
        return all(_cross(a, b, p) >= 0 for a, b in self.edges())

    def contains_polygon(self, other: "ConvexPolygon") -> bool:
        return all(self.contains(v) for v in other.vertices)

    def scale(self, r) -> "ConvexPolygon":
        r = Fraction(r)
        if r <= 0:
            raise PreconditionError("scaling ratio must be positive")
        return ConvexPolygon.hull(
            [RatPoint(v.x * r, v.y * r) for v in self.vertices]
        )

    def translate(self, dx, dy) -> "ConvexPolygon":
        dx, dy = Fraction(dx), Fraction(dy)
        return ConvexPolygon.hull(
            [RatPoint(v.x + dx, v.y + dy) for v in self.vertices]
        )

    def face(self, w) -> tuple[RatPoint, ...]:
        """Vertices maximizing the functional w, as a boundary-ordered tuple.

        w is anything with a ``weight_point`` method or a (u, v) pair.
        """
        weigh = getattr(w, "weight_point", None)
        if weigh is None:
            u, v = w
            weigh = lambda p: Fraction(u) * p.x + Fraction(v) * p.y
        best = max(weigh(v) for v in self.vertices)
        return tuple(v for v in self.vertices if weigh(v) == best)


def rect_polygon(m: int, n: int) -> ConvexPolygon:
    """Axis-aligned rectangle spanned by the origin and (m, n)."""
    if m < 0 or n < 0:
        raise PreconditionError("rectangle corners must be nonnegative")
    corners = {pt(0, 0), pt(m, 0), pt(m, n), pt(0, n)}
    return ConvexPolygon.hull(corners)


# -- supports and Newton polygons ---------------------------------------


def support(f: PuiseuxPoly) -> set[RatPoint]:
    return {RatPoint(xe, ye) for (xe, ye) in f.support()}


def newton_polygon(f: PuiseuxPoly, augmented: bool = True) -> ConvexPolygon:
    """Convex hull of the support, including the origin when augmented."""
    pts = support(f)
    if augmented:
        pts.add(pt(0, 0))
    if not pts:
        raise PreconditionError(
            "newton_polygon of the zero polynomial requires augmented=True"
        )
    return ConvexPolygon.hull(pts)


def en_vertex(P: ConvexPolygon) -> RatPoint:
    """Among the rightmost vertices, the one with the larger y."""
    mx = max(v.x for v in P.vertices)
    return max((v for v in P.vertices if v.x == mx), key=lambda v: v.y)


def ne_vertex(P: ConvexPolygon) -> RatPoint:
    """Among the uppermost vertices, the one with the larger x."""
    my = max(v.y for v in P.vertices)
    return max((v for v in P.vertices if v.y == my), key=lambda v: v.x)


class RectMembership(enum.Enum):
    IN_R = "InR"
    IN_RBAR = "InRbar"
    NEITHER = "Neither"


def rect_membership(f: PuiseuxPoly, m: int, n: int) -> RectMembership:
    """Classify f against the rectangle classes at corner (m, n).

    IN_R: augmented polygon equals the full rectangle and the corner
    coefficient is 1.  IN_RBAR: polygon contained in the rectangle with a
    nonzero corner coefficient.
    """
    if m <= 0 or n <= 0:
        raise PreconditionError("corner coordinates must be positive")
    if f.is_zero():
        return RectMembership.NEITHER
    corner = f.coefficient(m, n)
    poly = newton_polygon(f, augmented=True)
    rect = rect_polygon(m, n)
    if not rect.contains_polygon(poly):
        return RectMembership.NEITHER
    if corner == 1 and poly == rect:
        return RectMembership.IN_R
    if corner != 0:
        return RectMembership.IN_RBAR
    return RectMembership.NEITHER


def n_prime_regions(a: int, m: int, n: int) -> tuple[ConvexPolygon,
                                                     ConvexPolygon]:
    """The corner rectangle Rect_{m/a,n/a} and its top-corner translate."""
    if a < 1 or m % a or n % a:
        raise PreconditionError("a must divide both m and n")
    nprime = rect_polygon(m // a, n // a)
    shift_x = Fraction((a - 1) * m, a)
    shift_y = Fraction((a - 1) * n, a)
    return nprime, nprime.translate(shift_x, shift_y)


# -- the narrow region --------------------------------------------------


@dataclass(frozen=True)
class RegionR:
    """The strip between the line through (m,n) and C and the diagonal.

    C = (a/(a+b), a/(a+b)); the region contains points (x, y) with
    0 <= y < (a-1)n/a, slope-line value <= y <= (n/m)x.
    """

    a: int
    b: int
    m: int
    n: int
    C: RatPoint = field(init=False)
    slope_m: Fraction = field(init=False)

    def __post_init__(self):
        a, b, m, n = self.a, self.b, self.m, self.n
        if not (2 <= a < b) or gcd(a, b) != 1:
            raise PreconditionError("need gcd(a,b)=1 and 2 <= a < b")
        if m % a or n % a:
            raise PreconditionError("a must divide both m and n")
        c = Fraction(a, a + b)
        object.__setattr__(self, "C", RatPoint(c, c))
        object.__setattr__(
            self, "slope_m", Fraction(n - c, m - c)
        )

    def lower_line_value(self, x) -> Fraction:
        c = self.C.x
        return self.slope_m * (Fraction(x) - c) + c


def region_R_contains(R: RegionR, p) -> bool:
    p = RatPoint(Fraction(p[0]), Fraction(p[1]))
    top = Fraction((R.a - 1) * R.n, R.a)
    if not (0 <= p.y < top):
        return False
    if not (R.lower_line_value(p.x) <= p.y):
        return False
    return p.y <= Fraction(R.n, R.m) * p.x


def lattice_points_in_R(R: RegionR) -> list[tuple[int, int]]:
    """All integer points of the region, sorted by height.

    The width at any height is below 1, so each height contributes at most
    one point; scanning heights keeps the enumeration linear.
    """
    out = []
    top = Fraction((R.a - 1) * R.n, R.a)
    y = 0
    while y < top:
        # n/m * x >= y  and  lower_line_value(x) <= y
        x_min = -(-y * R.m // R.n)  # ceil(y*m/n)
        # slope_m * (x - c) + c <= y  =>  x <= (y - c)/slope_m + c
        x_max_f = (Fraction(y) - R.C.x) / R.slope_m + R.C.x
        x_max = x_max_f.numerator // x_max_f.denominator  # floor
        for x in range(int(x_min), int(x_max) + 1):
            if region_R_contains(R, (x, y)):
                out.append((x, y))
        y += 1
    out.sort(key=lambda q: (q[1], q[0]))
    return out


def in_L_v(a: int, b: int, v, p) -> bool:
    """First-quadrant points strictly right of the line through v and C."""
    v = RatPoint(Fraction(v[0]), Fraction(v[1]))
    p = RatPoint(Fraction(p[0]), Fraction(p[1]))
    c = Fraction(a, a + b)
    if not (v.x > c and v.y > 0):
        raise PreconditionError("vertex must satisfy v.x > a/(a+b), v.y > 0")
    if p.x < 0 or p.y < 0:
        return False
    slope = (v.y - c) / (v.x - c)
    return 0 < p.y < slope * (p.x - c) + c


# -- lattice measures ---------------------------------------------------


def shoelace_area(P: ConvexPolygon) -> Fraction:
    v = P.vertices
    if len(v) < 3:
        return Fraction(0)
    total = Fraction(0)
    for a, b in P.edges():
        total += a.x * b.y - b.x * a.y
    return total / 2


def boundary_lattice_count(P: ConvexPolygon) -> int:
    v = P.vertices
    if len(v) == 1:
        return 1
    count = 0
    for a, b in P.edges():
        dx, dy = b.x - a.x, b.y - a.y
        count += gcd(abs(int(dx)), abs(int(dy)))
    if len(v) == 2:
        count = count + 1  # a segment traverses its points once
    return count


def pick_area(P: ConvexPolygon) -> tuple[Fraction, int, int]:
    """(area, interior count, boundary count) for a lattice polygon.

    The interior count comes from Pick's identity i = A - b/2 + 1, with the
    area checked against the shoelace formula.
    """
    for v in P.vertices:
        if v.x.denominator != 1 or v.y.denominator != 1:
            raise PreconditionError(f"non-lattice vertex {v}")
    if len(P.vertices) < 3:
        raise PreconditionError("Pick's identity needs a nondegenerate polygon")
    area = shoelace_area(P)
    b = boundary_lattice_count(P)
    interior = area - Fraction(b, 2) + 1
    if interior.denominator != 1 or interior < 0:
        raise PreconditionError("shoelace area is inconsistent with Pick")
    return area, int(interior), b


def similarity_check(P: ConvexPolygon,
                     Q: ConvexPolygon) -> Optional[Fraction]:
    """Ratio r with Q = r*P about the origin, or None."""
    if len(P.vertices) != len(Q.vertices):
        return None
    ratio = None
    for vp, vq in zip(P.vertices, Q.vertices):
        if (vp.x == 0) != (vq.x == 0) or (vp.y == 0) != (vq.y == 0):
            return None
        for a, b in ((vp.x, vq.x), (vp.y, vq.y)):
            if a == 0:
                continue
            r = b / a
            if ratio is None:
                ratio = r
            elif ratio != r:
                return None
    if ratio is None:
        ratio = Fraction(1)  # both are the origin point
    return ratio if ratio > 0 else None


# -- SVG rendering -------------------------------------------------------


_SVG_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b",
               "#e377c2")


def svg_polygon(P: ConvexPolygon, label: str = "") -> dict:
    return {"type": "polygon", "polygon": P, "label": label}


def svg_point(p, label: str = "") -> dict:
    return {"type": "point", "point": RatPoint(Fraction(p[0]), Fraction(p[1])),
            "label": label}


def svg_line(p, q, label: str = "") -> dict:
    return {
        "type": "line",
        "p": RatPoint(Fraction(p[0]), Fraction(p[1])),
        "q": RatPoint(Fraction(q[0]), Fraction(q[1])),
        "label": label,
    }


def _fmt(value: Fraction, scale: Fraction, offset: Fraction) -> str:
    v = value * scale + offset
    if v.denominator == 1:
        return str(v.numerator)
    return f"{float(v):.4f}"


def render_svg(items: Sequence[dict], width: int = 400) -> str:
    """Deterministic standalone SVG for tagged polygons, points, and lines.

    Items are dicts from the svg_* constructors.  Coordinates are scaled to
    the drawing width and flipped so y grows upward; vertices of polygons
    get coordinate labels.
    """
    xs, ys = [Fraction(0)], [Fraction(0)]
    for item in items:
        if item["type"] == "polygon":
            for v in item["polygon"].vertices:
                xs.append(v.x)
                ys.append(v.y)
        elif item["type"] == "point":
            xs.append(item["point"].x)
            ys.append(item["point"].y)
        else:
            for p in (item["p"], item["q"]):
                xs.append(p.x)
                ys.append(p.y)
    span_x = max(xs) - min(xs) or Fraction(1)
    span_y = max(ys) - min(ys) or Fraction(1)
    margin = Fraction(width, 10)
    scale = (Fraction(width) - 2 * margin) / max(span_x, span_y)
    height = int(span_y * scale + 2 * margin)

    def sx(v: Fraction) -> str:
        return _fmt(v - min(xs), scale, margin)

    def sy(v: Fraction) -> str:
        return _fmt(max(ys) - v, scale, margin)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">'
    ]
    for idx, item in enumerate(items):
        color = _SVG_COLORS[idx % len(_SVG_COLORS)]
        label = item.get("label", "")
        if item["type"] == "polygon":
            P = item["polygon"]
            pts = " ".join(
                f"{sx(v.x)},{sy(v.y)}" for v in P.vertices
            )
            if P.is_point():
                v = P.vertices[0]
                out.append(
                    f'<circle cx="{sx(v.x)}" cy="{sy(v.y)}" r="3" '
                    f'fill="{color}"/>'
                )
            else:
                out.append(
                    f'<polygon points="{pts}" fill="{color}" '
                    f'fill-opacity="0.15" stroke="{color}"/>'
                )
            for v in P.vertices:
                out.append(
                    f'<text x="{sx(v.x)}" y="{sy(v.y)}" font-size="10" '
                    f'fill="{color}">({v.x},{v.y})</text>'
                )
            if label:
                cx = sum(v.x for v in P.vertices) / len(P.vertices)
                cy = sum(v.y for v in P.vertices) / len(P.vertices)
                out.append(
                    f'<text x="{sx(cx)}" y="{sy(cy)}" font-size="12" '
                    f'fill="{color}">{label}</text>'
                )
        elif item["type"] == "point":
            p = item["point"]
            out.append(
                f'<circle cx="{sx(p.x)}" cy="{sy(p.y)}" r="3" '
                f'fill="{color}"/>'
            )
            if label:
                out.append(
                    f'<text x="{sx(p.x)}" y="{sy(p.y)}" font-size="10" '
                    f'fill="{color}">{label}</text>'
                )
        else:
            p, q = item["p"], item["q"]
            out.append(
                f'<line x1="{sx(p.x)}" y1="{sy(p.y)}" x2="{sx(q.x)}" '
                f'y2="{sy(q.y)}" stroke="{color}"/>'
            )
            if label:
                out.append(
                    f'<text x="{sx(q.x)}" y="{sy(q.y)}" font-size="10" '
                    f'fill="{color}">{label}</text>'
                )
    out.append("</svg>")
    return "\n".join(out)


def polygon_to_json(P: ConvexPolygon) -> list:
    """Vertices as [[xnum, xden], [ynum, yden]] pairs."""
    return [
        [[v.x.numerator, v.x.denominator], [v.y.numerator, v.y.denominator]]
        for v in P.vertices
    ]
