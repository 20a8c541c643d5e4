"""Exact bivariate polynomial arithmetic with rational exponents.

The coefficient field is Q (``fractions.Fraction``); exponents are rationals
constrained by a ring tag:

* ``plain``   -- Q[x, y]: nonnegative integer exponents in both variables.
* ``q12(p)``  -- Q[x^(1/p), x^(-1/p), y]: x-exponents in (1/p)Z, y in Z>=0.
* ``q14(p)``  -- Q[x, y^(1/p), y^(-1/p)]: mirror image of q12.
* ``free``    -- arbitrary rational exponents in both variables (internal
  carrier for fractional-power computations).

Values are immutable after construction; all operations return new objects.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, lcm
from typing import Iterable, Iterator, Mapping, Optional, Union

from .errors import ParseError, PreconditionError, RingMismatchError

Rat = Union[int, Fraction]

PLAIN = "plain"
Q12 = "q12"
Q14 = "q14"
FREE = "free"


class RingTag:
    """Identifies which exponent lattice a polynomial lives on."""

    __slots__ = ("kind", "denom")

    def __init__(self, kind: str, denom: int = 1):
        if kind not in (PLAIN, Q12, Q14, FREE):
            raise ValueError(f"unknown ring kind {kind!r}")
        if denom < 1:
            raise ValueError("denominator bound must be positive")
        if kind in (PLAIN, FREE):
            denom = 1
        self.kind = kind
        self.denom = denom

    def __eq__(self, other):
        return (
            isinstance(other, RingTag)
            and self.kind == other.kind
            and self.denom == other.denom
        )

    def __hash__(self):
        return hash((self.kind, self.denom))

    def __repr__(self):
        if self.kind in (Q12, Q14):
            return f"RingTag({self.kind!r}, {self.denom})"
        return f"RingTag({self.kind!r})"

    def admits(self, xexp: Fraction, yexp: Fraction) -> bool:
        if self.kind == FREE:
            return True
        if self.kind == PLAIN:
            return (
                xexp.denominator == 1
                and yexp.denominator == 1
                and xexp >= 0
                and yexp >= 0
            )
        if self.kind == Q12:
            return self.denom % xexp.denominator == 0 and (
                yexp.denominator == 1 and yexp >= 0
            )
        # Q14
        return self.denom % yexp.denominator == 0 and (
            xexp.denominator == 1 and xexp >= 0
        )

    def join(self, other: "RingTag") -> "RingTag":
        """Smallest common ring containing both operand rings."""
        if self == other:
            return self
        if self.kind == FREE or other.kind == FREE:
            return RingTag(FREE)
        if self.kind == PLAIN:
            return other
        if other.kind == PLAIN:
            return self
        if self.kind == other.kind:
            return RingTag(self.kind, lcm(self.denom, other.denom))
        raise RingMismatchError(
            f"cannot combine rings {self!r} and {other!r}"
        )


def plain_ring() -> RingTag:
    return RingTag(PLAIN)


def q12_ring(p: int) -> RingTag:
    return RingTag(Q12, p)


def q14_ring(p: int) -> RingTag:
    return RingTag(Q14, p)


def free_ring() -> RingTag:
    return RingTag(FREE)


ExpPair = tuple[Fraction, Fraction]


def _exp(e: Rat) -> Fraction:
    return e if isinstance(e, Fraction) else Fraction(e)


class PuiseuxPoly:
    """A finite sum of terms c * x^a * y^b with exact rational data.

    Terms are stored as a map (xexp, yexp) -> coefficient with no zero
    coefficients; two polynomials are equal iff their term maps are equal,
    regardless of ring tag.
    """

    __slots__ = ("ring", "_terms")

    def __init__(self, terms: Mapping[ExpPair, Fraction], ring: RingTag,
                 _validated: bool = False):
        if _validated:
            self._terms = dict(terms)
        else:
            clean: dict[ExpPair, Fraction] = {}
            for (xe, ye), c in terms.items():
                c = Fraction(c)
                if c == 0:
                    continue
                key = (_exp(xe), _exp(ye))
                if not ring.admits(*key):
                    raise PreconditionError(
                        f"exponent pair {key} outside ring {ring!r}"
                    )
                clean[key] = clean.get(key, Fraction(0)) + c
            self._terms = {k: v for k, v in clean.items() if v != 0}
        self.ring = ring

    # -- constructors ------------------------------------------------

    @staticmethod
    def zero(ring: RingTag = None) -> "PuiseuxPoly":
        return PuiseuxPoly({}, ring or plain_ring(), _validated=True)

    @staticmethod
    def constant(c: Rat, ring: RingTag = None) -> "PuiseuxPoly":
        return PuiseuxPoly(
            {(Fraction(0), Fraction(0)): Fraction(c)}, ring or plain_ring()
        )

    @staticmethod
    def monomial(c: Rat, xexp: Rat, yexp: Rat,
                 ring: RingTag = None) -> "PuiseuxPoly":
        if ring is None:
            ring = _minimal_ring([(_exp(xexp), _exp(yexp))])
        return PuiseuxPoly({(_exp(xexp), _exp(yexp)): Fraction(c)}, ring)

    @staticmethod
    def variable(name: str) -> "PuiseuxPoly":
        if name == "x":
            return PuiseuxPoly.monomial(1, 1, 0, plain_ring())
        if name == "y":
            return PuiseuxPoly.monomial(1, 0, 1, plain_ring())
        raise ValueError("variable must be 'x' or 'y'")

    # -- inspection --------------------------------------------------

    @property
    def terms(self) -> dict[ExpPair, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[ExpPair, Fraction]]:
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise PreconditionError("polynomial is not constant")
        return self._terms.get((Fraction(0), Fraction(0)), Fraction(0))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def coefficient(self, xexp: Rat, yexp: Rat) -> Fraction:
        return self._terms.get((_exp(xexp), _exp(yexp)), Fraction(0))

    def support(self) -> set[ExpPair]:
        return set(self._terms)

    def deg_x(self) -> Optional[Fraction]:
        if not self._terms:
            return None
        return max(xe for xe, _ in self._terms)

    def deg_y(self) -> Optional[Fraction]:
        if not self._terms:
            return None
        return max(ye for _, ye in self._terms)

    def exponent_denominators(self) -> tuple[int, int]:
        """lcm of x-exponent and of y-exponent denominators (1 for 0)."""
        xd = yd = 1
        for xe, ye in self._terms:
            xd = lcm(xd, xe.denominator)
            yd = lcm(yd, ye.denominator)
        return xd, yd

    # -- equality ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, PuiseuxPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == PuiseuxPoly.constant(
                other, free_ring()
            )._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    # -- arithmetic --------------------------------------------------

    def _coerce(self, other) -> Optional["PuiseuxPoly"]:
        if isinstance(other, PuiseuxPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return PuiseuxPoly.constant(other, self.ring)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        ring = self.ring.join(other.ring)
        terms = dict(self._terms)
        for k, c in other._terms.items():
            s = terms.get(k, Fraction(0)) + c
            if s == 0:
                terms.pop(k, None)
            else:
                terms[k] = s
        return PuiseuxPoly(terms, ring, _validated=True)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxPoly(
            {k: -c for k, c in self._terms.items()}, self.ring, _validated=True
        )

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return PuiseuxPoly.zero(self.ring)
            return PuiseuxPoly(
                {k: v * c for k, v in self._terms.items()},
                self.ring,
                _validated=True,
            )
        if not isinstance(other, PuiseuxPoly):
            return NotImplemented
        ring = self.ring.join(other.ring)
        out: dict[ExpPair, Fraction] = {}
        for (xa, ya), ca in self._terms.items():
            for (xb, yb), cb in other._terms.items():
                key = (xa + xb, ya + yb)
                s = out.get(key, Fraction(0)) + ca * cb
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
        return PuiseuxPoly(out, ring, _validated=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise PreconditionError("only nonnegative integer powers")
        result = PuiseuxPoly.constant(1, self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def scale_exponents(self, rx: Rat, ry: Rat) -> "PuiseuxPoly":
        """Substitute x -> x^rx, y -> y^ry (exponent dilation)."""
        rx, ry = _exp(rx), _exp(ry)
        terms = {(xe * rx, ye * ry): c for (xe, ye), c in self._terms.items()}
        return PuiseuxPoly(terms, _minimal_ring(terms))

    def transpose(self) -> "PuiseuxPoly":
        """Swap the roles of x and y."""
        terms = {(ye, xe): c for (xe, ye), c in self._terms.items()}
        if self.ring.kind == Q12:
            ring = q14_ring(self.ring.denom)
        elif self.ring.kind == Q14:
            ring = q12_ring(self.ring.denom)
        else:
            ring = self.ring
        return PuiseuxPoly(terms, ring)

    def with_ring(self, ring: RingTag) -> "PuiseuxPoly":
        return PuiseuxPoly(self._terms, ring)

    # -- calculus ----------------------------------------------------

    def partial_x(self) -> "PuiseuxPoly":
        out: dict[ExpPair, Fraction] = {}
        for (xe, ye), c in self._terms.items():
            if xe != 0:
                out[(xe - 1, ye)] = c * xe
        ring = self.ring
        return PuiseuxPoly(out, ring if _all_admitted(out, ring) else
                           _minimal_ring(out))

    def partial_y(self) -> "PuiseuxPoly":
        out: dict[ExpPair, Fraction] = {}
        for (xe, ye), c in self._terms.items():
            if ye != 0:
                out[(xe, ye - 1)] = c * ye
        ring = self.ring
        return PuiseuxPoly(out, ring if _all_admitted(out, ring) else
                           _minimal_ring(out))

    # -- printing ----------------------------------------------------

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"PuiseuxPoly({to_text(self)!r})"


def _all_admitted(terms: Mapping[ExpPair, Fraction], ring: RingTag) -> bool:
    return all(ring.admits(xe, ye) for (xe, ye) in terms)


def _minimal_ring(terms: Iterable[ExpPair]) -> RingTag:
    """Smallest ring tag admitting every exponent pair."""
    x_ok_plain = y_ok_plain = True
    xden = yden = 1
    for xe, ye in terms:
        if xe.denominator != 1 or xe < 0:
            x_ok_plain = False
        if ye.denominator != 1 or ye < 0:
            y_ok_plain = False
        xden = lcm(xden, xe.denominator)
        yden = lcm(yden, ye.denominator)
    if x_ok_plain and y_ok_plain:
        return plain_ring()
    if y_ok_plain:
        return q12_ring(xden)
    if x_ok_plain:
        return q14_ring(yden)
    return free_ring()


# -- spec-level operation aliases ------------------------------------


def add(f: PuiseuxPoly, g: PuiseuxPoly) -> PuiseuxPoly:
    return f + g


def mul(f: PuiseuxPoly, g: PuiseuxPoly) -> PuiseuxPoly:
    return f * g


def int_pow(f: PuiseuxPoly, k: int) -> PuiseuxPoly:
    return f ** k


def jacobian(f: PuiseuxPoly, g: PuiseuxPoly) -> PuiseuxPoly:
    """Determinant of partial derivatives, f_x g_y - f_y g_x."""
    return f.partial_x() * g.partial_y() - f.partial_y() * g.partial_x()


def shift_substitute(f: PuiseuxPoly, c: Rat, u: int, v: int) -> PuiseuxPoly:
    """Apply x -> x, y -> y + c*x^(-u/v) exactly.

    For u = 0, v = 1 this is the ordinary translation y -> y + c.  The
    result ring allows x-denominator lcm(v, p) where p is the input's bound.
    """
    if v <= 0:
        raise PreconditionError("v must be a positive integer")
    c = Fraction(c)
    if f.ring.kind == Q14:
        raise RingMismatchError("shift_substitute acts on q12-like rings")
    p_old = f.ring.denom if f.ring.kind == Q12 else 1
    ring = q12_ring(lcm(v, p_old))
    if c == 0:
        return f.with_ring(ring)
    step = Fraction(-u, v)
    out: dict[ExpPair, Fraction] = {}
    for (xe, ye), coef in f._terms.items():
        j = int(ye)
        if ye != j or j < 0:
            raise PreconditionError(
                "y-exponents must be nonnegative integers for the shift"
            )
        cpow = Fraction(1)
        for k in range(j + 1):
            key = (xe + k * step, Fraction(j - k))
            s = out.get(key, Fraction(0)) + coef * comb(j, k) * cpow
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
            cpow *= c
    return PuiseuxPoly(out, ring, _validated=True)


# -- parsing ----------------------------------------------------------


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> Optional[str]:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]

    def take_char(self) -> str:
        ch = self.peek()
        if ch is None:
            raise ParseError("unexpected end of input", self.pos)
        self.pos += 1
        return ch

    def take_int(self) -> int:
        ch = self.peek()
        if ch is None or not ch.isdigit():
            raise ParseError("expected a number", self.pos)
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return int(self.text[start:self.pos])


class _Parser:
    """Recursive-descent parser for the polynomial grammar.

    expr   := ('+'|'-')? term (('+'|'-') term)*
    term   := factor ('*'? factor)*
    factor := atom ('^' exponent)?
    atom   := rational | 'x' | 'y' | '(' expr ')'
    """

    def __init__(self, text: str):
        self.tk = _Tokenizer(text)

    def parse(self) -> PuiseuxPoly:
        value = self.expr()
        if self.tk.peek() is not None:
            raise ParseError(
                f"unexpected character {self.tk.peek()!r}", self.tk.pos
            )
        return value

    def expr(self) -> PuiseuxPoly:
        sign = self._sign_run()
        value = self.term() * sign
        while True:
            ch = self.tk.peek()
            if ch in ("+", "-"):
                self.tk.take_char()
                extra = self._sign_run()
                nxt = self.term() * (extra if ch == "+" else -extra)
                value = value + nxt
            else:
                return value

    def _sign_run(self) -> int:
        sign = 1
        while self.tk.peek() in ("+", "-"):
            if self.tk.take_char() == "-":
                sign = -sign
        return sign

    def term(self) -> PuiseuxPoly:
        value = self.factor()
        while True:
            ch = self.tk.peek()
            if ch == "*":
                self.tk.take_char()
                value = value * self.factor()
            elif ch is not None and (ch.isdigit() or ch in "xy("):
                value = value * self.factor()
            else:
                return value

    def factor(self) -> PuiseuxPoly:
        base = self.atom()
        if self.tk.peek() == "^":
            self.tk.take_char()
            e = self.exponent()
            if e.denominator == 1 and e >= 0:
                return base ** int(e)
            if not base.is_monomial():
                raise ParseError(
                    "fractional or negative exponents require a monomial base",
                    self.tk.pos,
                )
            ((xe, ye), c) = next(iter(base.items()))
            if e.denominator == 1:
                coef = Fraction(1) / c ** (-e.numerator)
            elif c == 1:
                coef = Fraction(1)
            else:
                raise ParseError(
                    "fractional powers need a unit coefficient", self.tk.pos
                )
            terms = {(xe * e, ye * e): coef}
            return PuiseuxPoly(terms, _minimal_ring(terms))
        return base

    def exponent(self) -> Fraction:
        ch = self.tk.peek()
        if ch == "(":
            self.tk.take_char()
            sign = self._sign_run()
            num = self.tk.take_int()
            den = 1
            if self.tk.peek() == "/":
                self.tk.take_char()
                den = self.tk.take_int()
            if self.tk.peek() != ")":
                raise ParseError("expected ')' in exponent", self.tk.pos)
            self.tk.take_char()
            return Fraction(sign * num, den)
        sign = self._sign_run()
        num = self.tk.take_int()
        return Fraction(sign * num)

    def atom(self) -> PuiseuxPoly:
        ch = self.tk.peek()
        if ch is None:
            raise ParseError("unexpected end of input", self.tk.pos)
        if ch.isdigit():
            num = self.tk.take_int()
            if self.tk.peek() == "/":
                self.tk.take_char()
                den = self.tk.take_int()
                if den == 0:
                    raise ParseError("zero denominator", self.tk.pos)
                return PuiseuxPoly.constant(Fraction(num, den), free_ring())
            return PuiseuxPoly.constant(num, free_ring())
        if ch in ("x", "y"):
            self.tk.take_char()
            return PuiseuxPoly.variable(ch)
        if ch == "(":
            self.tk.take_char()
            value = self.expr()
            if self.tk.peek() != ")":
                raise ParseError("expected ')'", self.tk.pos)
            self.tk.take_char()
            return value
        raise ParseError(f"unexpected character {ch!r}", self.tk.pos)


def parse(text: str, ring: RingTag = None) -> PuiseuxPoly:
    """Parse polynomial text into canonical expanded form.

    With ``ring=None`` the smallest admitting ring tag is inferred; an
    explicit tag validates the expanded exponents against that ring.
    """
    value = _Parser(text).parse()
    if ring is None:
        return PuiseuxPoly(value.terms, _minimal_ring(value.terms))
    return PuiseuxPoly(value.terms, ring)


# -- printing ----------------------------------------------------------


def _format_exponent(e: Fraction) -> str:
    if e.denominator == 1 and e >= 0:
        return str(e.numerator)
    if e.denominator == 1:
        return f"({e.numerator})"
    return f"({e.numerator}/{e.denominator})"


def _format_term(xe: Fraction, ye: Fraction, c: Fraction) -> str:
    parts = []
    if xe != 0:
        parts.append("x" if xe == 1 else f"x^{_format_exponent(xe)}")
    if ye != 0:
        parts.append("y" if ye == 1 else f"y^{_format_exponent(ye)}")
    mag = abs(c)
    if not parts:
        return str(mag)
    if mag != 1:
        parts.insert(0, str(mag))
    return "*".join(parts)


def term_sort_key(item: tuple[ExpPair, Fraction]):
    (xe, ye), _ = item
    return (xe + ye, xe, ye)


def to_text(f: PuiseuxPoly) -> str:
    """Canonical printer: graded-lex order, largest terms first."""
    if f.is_zero():
        return "0"
    items = sorted(f.items(), key=term_sort_key, reverse=True)
    out = []
    for i, ((xe, ye), c) in enumerate(items):
        body = _format_term(xe, ye, c)
        if i == 0:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(out)


# -- truncated series --------------------------------------------------


class TruncSeries:
    """Formal series in an auxiliary variable t, truncated at a fixed order.

    Index k holds the exact coefficient of t^k; coefficients may be any
    values supporting +, * and scaling (polynomials, H-Laurent elements).
    Binary operations truncate to the smaller of the two orders.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: list, order: int):
        if order < 0:
            raise PreconditionError("truncation order must be >= 0")
        self.coeffs = list(coeffs[: order + 1])
        self.order = order

    @staticmethod
    def from_poly_parts(parts: list, order: int) -> "TruncSeries":
        return TruncSeries(parts, order)

    def coefficient(self, k: int):
        if k > self.order:
            raise PreconditionError(
                f"coefficient t^{k} beyond truncation order {self.order}"
            )
        if k < len(self.coeffs):
            return self.coeffs[k]
        return self._zero_like()

    def _zero_like(self):
        for c in self.coeffs:
            return c * 0
        raise PreconditionError("empty series has no coefficient context")

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        order = min(self.order, other.order)
        zero = self._zero_like()
        out = []
        for k in range(order + 1):
            a = self.coeffs[k] if k < len(self.coeffs) else zero
            b = other.coeffs[k] if k < len(other.coeffs) else zero
            out.append(a + b)
        return TruncSeries(out, order)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + other.scale(-1)

    def scale(self, c) -> "TruncSeries":
        return TruncSeries([v * c for v in self.coeffs], self.order)

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        order = min(self.order, other.order)
        zero = self._zero_like()
        out = [zero for _ in range(order + 1)]
        for i, a in enumerate(self.coeffs):
            if i > order:
                break
            for j, b in enumerate(other.coeffs):
                if i + j > order:
                    break
                out[i + j] = out[i + j] + a * b
        return TruncSeries(out, order)

    def __pow__(self, k: int) -> "TruncSeries":
        if not isinstance(k, int) or k < 1:
            raise PreconditionError("only positive integer powers")
        result = self
        for _ in range(k - 1):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        order = min(self.order, other.order)
        for k in range(order + 1):
            if self.coefficient(k) != other.coefficient(k):
                return False
        return True

    def __repr__(self):
        inner = ", ".join(repr(c) for c in self.coeffs)
        return f"TruncSeries([{inner}], order={self.order})"
