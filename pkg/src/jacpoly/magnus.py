"""Fractional-power approximation machinery.

Let F and G have constant Jacobian, fix a direction w, and write the
graded decompositions F = sum F_i, G = sum G_i with d = w-deg(F) and
e = w-deg(G).  Inflating the gaps from the top degree into powers of a
bookkeeping variable t,

    Ftilde = F_d + F_{d-1} t + F_{d-2} t^2 + ...,

each graded piece of G is matched against t-coefficients of fractional
powers Ftilde^((e-gamma)/d), producing the coefficient sequence c_gamma.
All arithmetic happens in the module of formal H-powers, where H is the
deepest polynomial root of F_d; exactness over Q is preserved by first
rescaling F so its top corner coefficient is 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping, Optional, Sequence, Union

from .errors import PreconditionError
from .exactalg import PuiseuxPoly, TruncSeries, free_ring, jacobian
from .grading import Direction, decompose, graded_part, w_deg

Rat = Union[int, Fraction]


def multinomial(c: Rat, ms: Sequence[int]) -> Fraction:
    """Generalized multinomial coefficient with rational top argument.

    Equals c(c-1)...(c-sum(ms)+1) / prod(m_i!); the empty tuple gives 1.
    """
    c = Fraction(c)
    total = sum(ms)
    num = Fraction(1)
    for i in range(total):
        num *= c - i
    den = 1
    for m in ms:
        if m < 0:
            raise PreconditionError("multinomial indices must be >= 0")
        for i in range(2, m + 1):
            den *= i
    return num / den


# -- formal H-powers ------------------------------------------------------


class HPowers:
    """Memoized nonnegative powers of a fixed polynomial."""

    def __init__(self, H: PuiseuxPoly):
        self.H = H
        self._memo = {0: PuiseuxPoly.constant(1, H.ring), 1: H}

    def get(self, k: int) -> PuiseuxPoly:
        if k < 0:
            raise PreconditionError("only nonnegative powers are stored")
        if k not in self._memo:
            half = self.get(k // 2)
            self._memo[k] = half * half * (
                self.H if k % 2 else PuiseuxPoly.constant(1, self.H.ring)
            )
        return self._memo[k]


class HLaurent:
    """A finite sum  sum_k H^k * p_k  with integer k and polynomial p_k.

    Negative powers of H are formal; equality and zero tests clear them by
    multiplying through with H^(-min k), which is faithful because the
    polynomial ring has no zero divisors.
    """

    __slots__ = ("hp", "parts")

    def __init__(self, hp: HPowers, parts: Mapping[int, PuiseuxPoly]):
        self.hp = hp
        self.parts = {k: p for k, p in parts.items() if not p.is_zero()}

    @staticmethod
    def from_poly(hp: HPowers, p: PuiseuxPoly, k: int = 0) -> "HLaurent":
        return HLaurent(hp, {k: p})

    def zero_like(self) -> "HLaurent":
        return HLaurent(self.hp, {})

    def __add__(self, other: "HLaurent") -> "HLaurent":
        parts = dict(self.parts)
        for k, p in other.parts.items():
            q = parts.get(k)
            parts[k] = p if q is None else q + p
        return HLaurent(self.hp, parts)

    def __sub__(self, other: "HLaurent") -> "HLaurent":
        return self + other.scale(-1)

    def scale(self, c: Rat) -> "HLaurent":
        return HLaurent(self.hp, {k: p * c for k, p in self.parts.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out: dict[int, PuiseuxPoly] = {}
        for ka, pa in self.parts.items():
            for kb, pb in other.parts.items():
                k = ka + kb
                prod = pa * pb
                q = out.get(k)
                out[k] = prod if q is None else q + prod
        return HLaurent(self.hp, out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "HLaurent":
        return HLaurent(self.hp, {kk + k: p for kk, p in self.parts.items()})

    def cleared(self) -> tuple[int, PuiseuxPoly]:
        """(base exponent, polynomial) with value = H^base * polynomial."""
        if not self.parts:
            return 0, PuiseuxPoly.zero(free_ring())
        base = min(self.parts)
        acc = PuiseuxPoly.zero(free_ring())
        for k, p in self.parts.items():
            acc = acc + p * self.hp.get(k - base)
        return base, acc

    def is_zero(self) -> bool:
        if not self.parts:
            return True
        return self.cleared()[1].is_zero()

    def canonical(self) -> "HLaurent":
        """Fold nonnegative H-powers into the plain-polynomial slot."""
        parts: dict[int, PuiseuxPoly] = {}
        for k, p in self.parts.items():
            key = k if k < 0 else 0
            val = p if k <= 0 else p * self.hp.get(k)
            q = parts.get(key)
            parts[key] = val if q is None else q + val
        return HLaurent(self.hp, parts)

    def to_free_poly(self) -> PuiseuxPoly:
        """Collapse to a single polynomial; requires a monomial H."""
        if not self.hp.H.is_monomial():
            raise PreconditionError("collapsing needs a monomial H")
        ((hx, hy), hc) = next(iter(self.hp.H.items()))
        acc = PuiseuxPoly.zero(free_ring())
        for k, p in self.parts.items():
            mono = PuiseuxPoly.monomial(
                Fraction(hc) ** k, hx * k, hy * k, free_ring()
            )
            acc = acc + p * mono
        return acc

    def __repr__(self):
        inner = ", ".join(
            f"H^{k}*({p})" for k, p in sorted(self.parts.items())
        )
        return f"HLaurent({inner or '0'})"


# -- context --------------------------------------------------------------


def _segment_data(F_d: PuiseuxPoly):
    """Base point, primitive step, and one-variable coefficients of a
    graded form supported on a segment."""
    pts = sorted(F_d.support())
    base = pts[0]
    if len(pts) == 1:
        return base, (Fraction(0), Fraction(0)), {0: F_d.coefficient(*base)}
    dx = pts[-1][0] - base[0]
    dy = pts[-1][1] - base[1]
    if dx.denominator != 1 or dy.denominator != 1:
        raise PreconditionError("graded form needs integer exponents")
    g = gcd(abs(int(dx)), abs(int(dy)))
    step = (dx / g, dy / g)
    coeffs: dict[int, Fraction] = {}
    for p in pts:
        if step[0] != 0:
            t = (p[0] - base[0]) / step[0]
        else:
            t = (p[1] - base[1]) / step[1]
        if t.denominator != 1:
            raise PreconditionError("graded form is not on the step lattice")
        coeffs[int(t)] = F_d.coefficient(*p)
    return base, step, coeffs


def _dense_pow(h: list[Fraction], r: int) -> list[Fraction]:
    out = [Fraction(1)]
    for _ in range(r):
        new = [Fraction(0)] * (len(out) + len(h) - 1)
        for i, a in enumerate(out):
            if a == 0:
                continue
            for j, b in enumerate(h):
                if b != 0:
                    new[i + j] += a * b
        out = new
    return out


def _onevar_monic_root(coeffs: dict[int, Fraction],
                       deg: int, r: int) -> Optional[dict[int, Fraction]]:
    """Monic r-th root of a monic degree-deg one-variable polynomial.

    Coefficients are matched from the top down; each step is linear in the
    next unknown with slope r.  Returns None when the exact verification
    h^r == input fails.
    """
    if deg % r:
        return None
    hdeg = deg // r
    h = [Fraction(0)] * (hdeg + 1)
    h[hdeg] = Fraction(1)
    for idx in range(1, hdeg + 1):
        k = hdeg - idx
        hr = _dense_pow(h, r)
        target = deg - idx
        current = hr[target] if target < len(hr) else Fraction(0)
        want = coeffs.get(target, Fraction(0))
        h[k] = (want - current) / r
    hr = _dense_pow(h, r)
    for t in range(deg + 1):
        if hr[t] != coeffs.get(t, Fraction(0)):
            return None
    return {i: c for i, c in enumerate(h) if c != 0}


@dataclass
class MagnusContext:
    """Prepared data for matching G against fractional powers of F."""

    w: Direction
    d: int
    e: int
    r: int
    H: PuiseuxPoly
    F_parts: dict
    G_parts: dict
    f_scale: Fraction
    hp: HPowers = field(repr=False, default=None)
    gaps: dict = field(repr=False, default_factory=dict)
    _ucache: dict = field(repr=False, default_factory=dict)

    def mu_max(self) -> int:
        return self.d + self.e - self.w.u - self.w.v - 1


def _compute_root(F_d: PuiseuxPoly) -> tuple[int, PuiseuxPoly]:
    """Largest r with F_d^(1/r) a polynomial, together with that root.

    F_d must have top corner coefficient 1 (arranged by rescaling); the
    root is pinned by giving it corner coefficient 1 as well.
    """
    base, step, coeffs = _segment_data(F_d)
    if base[0].denominator != 1 or base[1].denominator != 1:
        raise PreconditionError("graded form needs integer exponents")
    deg = max(coeffs)
    cands = gcd(gcd(abs(int(base[0])), abs(int(base[1]))), deg)
    if cands == 0:
        raise PreconditionError("graded form is a nonzero constant")
    for r in range(cands, 0, -1):
        if cands % r:
            continue
        if base[0] % r or base[1] % r:
            continue
        root = _onevar_monic_root(coeffs, deg, r)
        if root is None:
            continue
        terms = {
            (base[0] / r + step[0] * t, base[1] / r + step[1] * t): c
            for t, c in root.items()
        }
        H = PuiseuxPoly(terms, free_ring())
        return r, H
    raise PreconditionError("no polynomial root found")  # r=1 always works


def magnus_context(F: PuiseuxPoly, G: PuiseuxPoly, w) -> MagnusContext:
    if not isinstance(w, Direction):
        w = Direction(int(w[0]), int(w[1]))
    if F.is_zero() or G.is_zero():
        raise PreconditionError("F and G must be nonzero")
    d = w_deg(F, w)
    e = w_deg(G, w)
    if d is None or d <= 0:
        raise PreconditionError("w-degree of F must be positive")
    if d.denominator != 1 or e.denominator != 1:
        raise PreconditionError("w-degrees must be integers")
    d, e = int(d), int(e)
    F_d = graded_part(F, w, d)
    scale = _corner_coefficient(F_d)
    Fs = F * (Fraction(1) / scale)
    F_parts = decompose(Fs, w)
    G_parts = decompose(G, w)
    r, H = _compute_root(graded_part(Fs, w, d))
    hp = HPowers(H)
    gaps = {}
    for deg, part in F_parts.items():
        i = d - deg
        if i > 0:
            if i.denominator != 1:
                raise PreconditionError("graded gaps must be integers")
            gaps[int(i)] = HLaurent.from_poly(hp, part, -r)
    return MagnusContext(
        w=w, d=d, e=e, r=r, H=H,
        F_parts={int(k): v for k, v in F_parts.items()},
        G_parts={int(k): v for k, v in G_parts.items()},
        f_scale=scale, hp=hp, gaps=gaps,
    )


def _corner_coefficient(F_d: PuiseuxPoly) -> Fraction:
    top = max(F_d.support())
    return F_d.coefficient(*top)


def _u_series(ctx: MagnusContext, A: Fraction, upto: int) -> list[HLaurent]:
    """Coefficients of (1 + S)^A where S collects the graded tails of F.

    Built by the first-order recurrence k*u_k = sum ((A+1)i - k) S_i u_{k-i},
    which follows from differentiating (1+S)^A once in t.
    """
    us = ctx._ucache.setdefault(
        A, [HLaurent(ctx.hp, {0: PuiseuxPoly.constant(1, free_ring())})]
    )
    while len(us) <= upto:
        k = len(us)
        acc = HLaurent(ctx.hp, {})
        for i, S_i in ctx.gaps.items():
            if i > k:
                continue
            coef = (A + 1) * i - k
            if coef == 0:
                continue
            acc = acc + (S_i * us[k - i]).scale(coef)
        us.append(acc.scale(Fraction(1, k)))
    return us


def frac_power_expand(ctx: MagnusContext, exponent: Rat,
                      trunc: int) -> TruncSeries:
    """Truncated expansion of Ftilde^exponent as H-Laurent coefficients.

    The t^k coefficient equals H^(r*exponent) times the k-th coefficient of
    (1+S)^exponent; r*exponent must be an integer.
    """
    A = Fraction(exponent)
    rA = A * ctx.r
    if rA.denominator != 1:
        raise PreconditionError("exponent must give an integral H-power")
    us = _u_series(ctx, A, trunc)
    return TruncSeries([us[k].shift(int(rA)) for k in range(trunc + 1)],
                       trunc)


def _tcoeff(ctx: MagnusContext, A: Fraction, k: int) -> HLaurent:
    rA = A * ctx.r
    if rA.denominator != 1:
        raise PreconditionError("exponent must give an integral H-power")
    return _u_series(ctx, A, k)[k].shift(int(rA))


# -- the solver ------------------------------------------------------------


@dataclass
class MagnusReport:
    """Solved coefficients, per-step residuals, and the extended constant.

    ``c[gamma]`` approximates G by c_gamma * F^((e-gamma)/d) summed over
    gamma; residuals map a step to the cleared polynomial that failed to
    match (empty means the formula is verified on the whole range).  The
    coefficients refer to F divided by ``f_scale``.
    """

    w: Direction
    d: int
    e: int
    r: int
    H: PuiseuxPoly
    f_scale: Fraction
    c: list[Fraction]
    residuals: dict[int, PuiseuxPoly]
    lam: Optional[Fraction] = None
    extended_ok: Optional[bool] = None
    lambda_consistent: Optional[bool] = None

    def verified(self) -> bool:
        return not self.residuals


def _solve_range(ctx: MagnusContext, mu_hi: int):
    """Determine c_0..c_mu_hi stepwise; returns (c list, residuals)."""
    cs: list[Fraction] = []
    residuals: dict[int, PuiseuxPoly] = {}
    zero = HLaurent(ctx.hp, {})
    for mu in range(mu_hi + 1):
        target = ctx.G_parts.get(ctx.e - mu)
        val = zero if target is None else HLaurent.from_poly(ctx.hp, target)
        for gamma, c_gamma in enumerate(cs):
            if c_gamma == 0:
                continue
            A = Fraction(ctx.e - gamma, ctx.d)
            val = val - _tcoeff(ctx, A, mu - gamma).scale(c_gamma)
        s = Fraction(ctx.r * (ctx.e - mu), ctx.d)
        base, P = val.cleared()
        if P.is_zero():
            cs.append(Fraction(0))
            continue
        if s.denominator != 1:
            cs.append(Fraction(0))
            residuals[mu] = P
            continue
        s = int(s)
        M = min(base, s)
        P_full = P * ctx.hp.get(base - M)
        T_full = ctx.hp.get(s - M)
        anchor = max(T_full.support())
        c_cand = P_full.coefficient(*anchor) / T_full.coefficient(*anchor)
        diff = P_full - T_full * c_cand
        cs.append(c_cand)
        if not diff.is_zero():
            residuals[mu] = diff
    return cs, residuals


def magnus_solve(F: PuiseuxPoly, G: PuiseuxPoly, w) -> MagnusReport:
    """Solve the graded matching of G against fractional powers of F.

    Requires a constant Jacobian and positive w-degree of F.  Failures of
    the matching identity are reported per step, never raised.
    """
    jac = jacobian(F, G)
    if not (jac.is_zero() or jac.is_constant()):
        raise PreconditionError("jacobian must be a constant")
    ctx = magnus_context(F, G, w)
    mu_hi = ctx.mu_max()
    if mu_hi < 0:
        return MagnusReport(ctx.w, ctx.d, ctx.e, ctx.r, ctx.H, ctx.f_scale,
                            [], {})
    cs, residuals = _solve_range(ctx, mu_hi)
    return MagnusReport(ctx.w, ctx.d, ctx.e, ctx.r, ctx.H, ctx.f_scale,
                        cs, residuals)


def magnus_extended(F: PuiseuxPoly, G: PuiseuxPoly) -> MagnusReport:
    """Vertical-direction solve extended by one step beyond the range.

    Needs the top horizontal slice of F to be a monomial x^m y^n with
    m != n; the final step determines both c_(d+e-1) and the constant
    lambda multiplying 1/(x^(m-1) y^(n-1)).  The reported lambda is checked
    against jacobian(F, G)/(n - m).
    """
    w = Direction(0, 1)
    jac = jacobian(F, G)
    if not (jac.is_zero() or jac.is_constant()):
        raise PreconditionError("jacobian must be a constant")
    ctx = magnus_context(F, G, w)
    F_d = graded_part(F, w, ctx.d)
    if len(F_d) != 1:
        raise PreconditionError("top slice of F must be a monomial")
    ((mm, nn), _c) = next(iter(F_d.items()))
    if mm.denominator != 1 or nn.denominator != 1:
        raise PreconditionError("monomial exponents must be integers")
    m, n = int(mm), int(nn)
    if m == n:
        raise PreconditionError(
            "equal exponents leave the extended constant undetermined"
        )
    mu0 = ctx.d + ctx.e - 1
    cs, residuals = _solve_range(ctx, mu0 - 1)

    zero = HLaurent(ctx.hp, {})
    target = ctx.G_parts.get(ctx.e - mu0)
    val = zero if target is None else HLaurent.from_poly(ctx.hp, target)
    for gamma, c_gamma in enumerate(cs):
        if c_gamma == 0:
            continue
        A = Fraction(ctx.e - gamma, ctx.d)
        val = val - _tcoeff(ctx, A, mu0 - gamma).scale(c_gamma)
    P = val.to_free_poly()
    # val = c_mu0 * F_d^((e-mu0)/d) - lam * x^(1-m) y^(1-n)
    exp1 = (Fraction(m * (ctx.e - mu0), ctx.d),
            Fraction(n * (ctx.e - mu0), ctx.d))
    exp2 = (Fraction(1 - m), Fraction(1 - n))
    c_mu0 = P.coefficient(*exp1)
    lam = -P.coefficient(*exp2)
    s = Fraction(ctx.r * (ctx.e - mu0), ctx.d)
    if s.denominator != 1 and c_mu0 != 0:
        residuals[mu0] = P  # a forced-zero coefficient came out nonzero
    diff = (
        P
        - PuiseuxPoly.monomial(c_mu0, exp1[0], exp1[1], free_ring())
        + PuiseuxPoly.monomial(lam, exp2[0], exp2[1], free_ring())
    )
    if not diff.is_zero():
        residuals[mu0] = diff
    cs.append(c_mu0)
    jac_scaled = (
        Fraction(0) if jac.is_zero()
        else jac.constant_value() / ctx.f_scale
    )
    consistent = lam == jac_scaled / (n - m)
    report = MagnusReport(
        ctx.w, ctx.d, ctx.e, ctx.r, ctx.H, ctx.f_scale, cs, residuals,
        lam=lam,
        lambda_consistent=consistent,
        extended_ok=(not residuals) and consistent,
    )
    return report


# -- one-variable rational powers -------------------------------------------


def _ov_mul(a: list[Fraction], b: list[Fraction], T: int) -> list[Fraction]:
    out = [Fraction(0)] * (T + 1)
    for i, ai in enumerate(a[: T + 1]):
        if ai == 0:
            continue
        for j, bj in enumerate(b[: T + 1 - i]):
            if bj != 0:
                out[i + j] += ai * bj
    return out


def _ov_pow(a: list[Fraction], k: int, T: int) -> list[Fraction]:
    out = [Fraction(0)] * (T + 1)
    out[0] = Fraction(1)
    base = list(a[: T + 1])
    while k:
        if k & 1:
            out = _ov_mul(out, base, T)
        k >>= 1
        if k:
            base = _ov_mul(base, base, T)
    return out


def _ov_inverse(a: list[Fraction], T: int) -> list[Fraction]:
    if not a or a[0] == 0:
        raise PreconditionError("constant term must be nonzero to invert")
    inv = [Fraction(0)] * (T + 1)
    inv[0] = Fraction(1) / a[0]
    for k in range(1, T + 1):
        acc = Fraction(0)
        for i in range(1, min(k, len(a) - 1) + 1):
            acc += a[i] * inv[k - i]
        inv[k] = -acc / a[0]
    return inv


def onevar_rational_power(A: Sequence[Rat], B: Sequence[Rat], a: int, b: int,
                          mu_max: int) -> list[Fraction]:
    """Coefficients of (A^a + B)^(b/a) up to s^mu_max.

    Expanded as sum_i binom(b/a; i) A^(b - a*i) B^i, with negative powers of
    A read as truncated series (the constant term of A must be nonzero).
    """
    if a < 1:
        raise PreconditionError("a must be a positive integer")
    A = [Fraction(v) for v in A]
    B = [Fraction(v) for v in B]
    if not A or A[0] == 0:
        raise PreconditionError("constant term of A must be nonzero")
    lowB = next((i for i, v in enumerate(B) if v != 0), None)
    T = mu_max
    Ainv = None
    out = [Fraction(0)] * (T + 1)
    i = 0
    Bi = [Fraction(1)] + [Fraction(0)] * T
    while True:
        if i > 0:
            if lowB is None or i * lowB > T:
                break
            Bi = _ov_mul(Bi, B, T)
            if all(v == 0 for v in Bi):
                break
        coef = multinomial(Fraction(b, a), [i])
        expnt = b - a * i
        if expnt >= 0:
            P = _ov_pow(A, expnt, T)
        else:
            if Ainv is None:
                Ainv = _ov_inverse(A, T)
            P = _ov_pow(Ainv, -expnt, T)
        term = _ov_mul(P, Bi, T)
        for k in range(T + 1):
            out[k] += coef * term[k]
        i += 1
        if lowB is None:
            break
    return out


# -- special-case weighted multinomials -------------------------------------


@dataclass
class SpecialCaseContext:
    """Parameters for the top-corner weighted-multinomial polynomials.

    a and b are the coprime pair, s the inner y-degree, e_coeffs the
    correction constants (e_0 = 1), and prefactor the rational value taken
    by the symbolic monomial ratio appearing with each power of e_j.
    abar/bbar default to a/b for the non-reduced variants.
    """

    a: int
    b: int
    s: int
    e_coeffs: tuple[Fraction, ...]
    prefactor: Fraction = Fraction(1)
    abar: Optional[int] = None
    bbar: Optional[int] = None
    d_p: Optional[Fraction] = None
    d_zeta: Optional[Fraction] = None
    kscale: Optional[Fraction] = None

    def __post_init__(self):
        if self.s < 0 or self.s >= self.a:
            raise PreconditionError("need 0 <= s < a")
        if self.abar is None:
            self.abar = self.a
        if self.bbar is None:
            self.bbar = self.b
        self.e_coeffs = tuple(Fraction(v) for v in self.e_coeffs)

    def weight_vector(self) -> tuple[int, ...]:
        return tuple(self.a - l for l in range(self.s))

    def expected_degree(self, i: int) -> Fraction:
        if self.kscale is None:
            raise PreconditionError("context has no scaling constant")
        return self.kscale * (self.b - i)


def minimal_scaling(vvec: Sequence[Optional[Fraction]],
                    wvec: Sequence[int]) -> Fraction:
    """Smallest k with k*wvec >= vvec componentwise (None = -infinity)."""
    best = None
    for v, w in zip(vvec, wvec):
        if v is None:
            continue
        cand = Fraction(v) / w
        if best is None or cand > best:
            best = cand
    if best is None:
        raise PreconditionError("all coordinates are -infinity")
    return best


def _weighted_compositions(total: int, weights: Sequence[int]):
    """All tuples n >= 0 with sum n_l * weights[l] == total."""
    if total < 0:
        return
    if not weights:
        if total == 0:
            yield ()
        return
    w0 = weights[0]
    for n0 in range(total // w0 + 1):
        for rest in _weighted_compositions(total - n0 * w0, weights[1:]):
            yield (n0,) + rest


def hhat_polynomial(ctx: SpecialCaseContext, i: int) -> dict:
    """The weighted-multinomial polynomial in x_0..x_{s-1} at index i.

    Terms run over solutions of a*n_0 + (a-1)*n_1 + ... + (a-s)*n_s = i - j
    for each correction index j; n_s enters the multinomial coefficient but
    not the monomial.
    """
    weights = [ctx.a - l for l in range(ctx.s + 1)]
    out: dict[tuple[int, ...], Fraction] = {}
    for j, ej in enumerate(ctx.e_coeffs):
        if ej == 0:
            continue
        t = i - j
        if t < 0:
            continue
        pref = ej * ctx.prefactor ** j
        top = Fraction(ctx.b - j, ctx.a)
        for ns in _weighted_compositions(t, weights):
            coef = pref * multinomial(top, list(ns))
            if coef == 0:
                continue
            key = ns[: ctx.s]
            out[key] = out.get(key, Fraction(0)) + coef
    return {k: v for k, v in out.items() if v != 0}


def weighted_multinomial_h(ctx: SpecialCaseContext, i: int,
                           values: Sequence[Rat]) -> Fraction:
    """Evaluate the index-i weighted-multinomial polynomial at values."""
    if len(values) != ctx.s:
        raise PreconditionError(f"need exactly {ctx.s} values")
    values = [Fraction(v) for v in values]
    total = Fraction(0)
    for key, coef in hhat_polynomial(ctx, i).items():
        term = coef
        for exp, v in zip(key, values):
            term *= v ** exp
        total += term
    return total


def w_weighted_part(poly: Mapping[tuple[int, ...], Fraction],
                    wvec: Sequence[int], degree: Rat) -> dict:
    """Slice of a multi-indexed polynomial with exact weighted degree."""
    degree = Fraction(degree)
    return {
        k: v
        for k, v in poly.items()
        if sum(Fraction(e * w) for e, w in zip(k, wvec)) == degree
    }


def recurrence_check(F_coeffs: Sequence, B_coeffs: Mapping[int, object],
                     a: int, b: int, j: int):
    """sum_i ((a+b)/a * i - j) * F_i * B_{j-i} over i = 0..a.

    Vanishes identically when B is the (b/a)-th power of F; coefficients
    may be rationals or polynomials.
    """
    if len(F_coeffs) != a + 1:
        raise PreconditionError("need coefficients F_0..F_a")
    acc = Fraction(0)
    for i in range(a + 1):
        Fi = F_coeffs[i]
        if isinstance(Fi, int):
            Fi = Fraction(Fi)
        Bji = B_coeffs.get(j - i)
        if Bji is None or Fi == 0:
            continue
        factor = Fraction(a + b, a) * i - j
        if factor == 0:
            continue
        acc = acc + (Fi * Bji) * factor
    return acc


# -- Laurent series in 1/y with x-polynomial coefficients --------------------


def laurent_y_mul(A: Mapping[int, PuiseuxPoly], B: Mapping[int, PuiseuxPoly],
                  floor_exp: Optional[int] = None) -> dict[int, PuiseuxPoly]:
    """Multiply maps {y-exponent: x-coefficient}, dropping exponents below
    the floor when one is given."""
    out: dict[int, PuiseuxPoly] = {}
    for ka, pa in A.items():
        for kb, pb in B.items():
            k = ka + kb
            if floor_exp is not None and k < floor_exp:
                continue
            prod = pa * pb
            q = out.get(k)
            out[k] = prod if q is None else q + prod
    return {k: p for k, p in out.items() if not p.is_zero()}


def h_series(ctx: SpecialCaseContext, q_coeffs: Sequence,
             z_coeffs: Sequence, trunc: int) -> dict[int, PuiseuxPoly]:
    """Expansion of sum_j e_j (q^abar + z)^((bbar-j)/abar) in powers of y.

    q_coeffs and z_coeffs list the y-coefficients (ascending) of q and z as
    x-polynomials or rationals; the top coefficient of q must be a monomial
    whose coefficient is an exact abar-th power.  Returns a map from the
    y-exponent down to -trunc to the exact x-coefficient.
    """
    abar, bbar = ctx.abar, ctx.bbar
    q = [_as_xpoly(v) for v in q_coeffs]
    z = [_as_xpoly(v) for v in z_coeffs]
    while q and q[-1].is_zero():
        q.pop()
    if not q:
        raise PreconditionError("q must be nonzero")
    top = q[-1]
    if not top.is_monomial():
        raise PreconditionError("top coefficient of q must be a monomial")
    ((_ax, ay), _ac) = next(iter(top.items()))
    if ay != 0:
        raise PreconditionError("q coefficients must not involve y")
    # T = q^abar + z as a polynomial in y
    qq: dict[int, PuiseuxPoly] = {
        i: p for i, p in enumerate(q) if not p.is_zero()
    }
    acc = {0: PuiseuxPoly.constant(1, free_ring())}
    for _ in range(abar):
        acc = laurent_y_mul(acc, qq)
    T = dict(acc)
    for i, p in enumerate(z):
        if p.is_zero():
            continue
        cur = T.get(i)
        T[i] = p if cur is None else cur + p
        if T[i].is_zero():
            del T[i]
    N = max(T)
    corner = T[N]
    if not corner.is_monomial():
        raise PreconditionError("corner of q^abar + z must be a monomial")
    ((cx, cy), cc) = next(iter(corner.items()))
    inv_corner = PuiseuxPoly.monomial(Fraction(1) / cc, -cx, -cy, free_ring())
    R = {
        k - N: p * inv_corner for k, p in T.items() if k != N
    }
    out: dict[int, PuiseuxPoly] = {}
    for j, ej in enumerate(ctx.e_coeffs):
        if ej == 0:
            continue
        A = Fraction(bbar - j, abar)
        top_y = Fraction(N * (bbar - j), abar)
        if top_y.denominator != 1:
            raise PreconditionError("top y-exponent is not an integer")
        top_y = int(top_y)
        lead = PuiseuxPoly.monomial(_rational_power(cc, A) * ej, cx * A,
                                    Fraction(0), free_ring())
        floor_rel = -trunc - top_y
        series = {0: PuiseuxPoly.constant(1, free_ring())}
        Ri = {0: PuiseuxPoly.constant(1, free_ring())}
        # keys of R are strictly negative, so R^i dies past -floor_rel
        for i in range(1, max(0, -floor_rel) + 1):
            Ri = laurent_y_mul(Ri, R, floor_rel)
            if not Ri:
                break
            coef = multinomial(A, [i])
            if coef == 0:
                continue
            for k, p in Ri.items():
                scaled = p * coef
                cur = series.get(k)
                series[k] = scaled if cur is None else cur + scaled
        for k, p in series.items():
            kk = k + top_y
            if kk < -trunc:
                continue
            val = p * lead
            cur = out.get(kk)
            out[kk] = val if cur is None else cur + val
    return {k: p for k, p in out.items() if not p.is_zero()}


def _rational_power(c: Fraction, A: Fraction) -> Fraction:
    from .genfactory import _rational_nth_root

    root = _rational_nth_root(c, A.denominator)
    if root is None:
        raise PreconditionError("coefficient has no exact rational root")
    return root ** A.numerator


def _as_xpoly(v) -> PuiseuxPoly:
    if isinstance(v, PuiseuxPoly):
        return v
    return PuiseuxPoly.constant(Fraction(v), free_ring())
