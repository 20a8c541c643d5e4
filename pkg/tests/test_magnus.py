"""Tests for the fractional-power matching machinery."""

import random
from fractions import Fraction

import pytest

from jacpoly.errors import PreconditionError
from jacpoly.exactalg import PuiseuxPoly, free_ring, jacobian, parse
from jacpoly.grading import Direction, decompose, graded_part, w_deg
from jacpoly.magnus import (
    HLaurent,
    SpecialCaseContext,
    frac_power_expand,
    h_series,
    hhat_polynomial,
    magnus_context,
    magnus_extended,
    magnus_solve,
    multinomial,
    onevar_rational_power,
    recurrence_check,
    w_weighted_part,
    weighted_multinomial_h,
)

F2 = Fraction


def test_multinomial_values():
    assert multinomial(F2(1, 2), [1]) == F2(1, 2)
    assert multinomial(F2(7, 3), []) == 1
    assert multinomial(F2(-1, 2), [2]) == F2(3, 8)
    assert multinomial(F2(3, 2), [1, 1]) == F2(3, 4)
    assert multinomial(5, [2, 3]) == Fraction(
        5 * 4 * 3 * 2 * 1, 2 * 6
    )


# -- fractional power expansion ------------------------------------------


def test_frac_power_expand_sqrt_example():
    # Ftilde = y^2 + x t^2; its square root starts y + (x/(2y)) t^2
    ctx = magnus_context(parse("x + y^2"), parse("y"), Direction(0, 1))
    assert (ctx.d, ctx.e, ctx.r) == (2, 1, 2)
    assert ctx.H == parse("y")
    series = frac_power_expand(ctx, F2(1, 2), 2)
    assert series.coefficient(0).parts == {1: PuiseuxPoly.constant(1)}
    assert series.coefficient(1).parts == {}
    t2 = series.coefficient(2)
    assert t2.parts == {-1: parse("x") * F2(1, 2)}
    # oracle: squaring the truncation recovers Ftilde mod t^3
    sq = series * series
    assert (sq.coefficient(0)
            - HLaurent.from_poly(ctx.hp, parse("y^2"))).is_zero()
    assert sq.coefficient(1).is_zero()
    assert (sq.coefficient(2) - HLaurent.from_poly(ctx.hp, parse("x"))
            ).is_zero()


def test_frac_power_expand_tail_free():
    ctx = magnus_context(parse("x^2*y^2"), parse("x*y"), Direction(1, 1))
    series = frac_power_expand(ctx, F2(1, 2), 3)
    assert series.coefficient(0).parts == {1: PuiseuxPoly.constant(1)}
    for k in (1, 2, 3):
        assert series.coefficient(k).is_zero()


def test_frac_power_expand_identity_exponent():
    F = parse("(x+1)^2*(y+1)^4 + (x+1)*(y+1)")
    ctx = magnus_context(F, parse("y"), Direction(1, 1))
    series = frac_power_expand(ctx, 1, 6)
    for k in range(7):
        part = ctx.F_parts.get(ctx.d - k)
        expect = (HLaurent.from_poly(ctx.hp, part) if part is not None
                  else HLaurent(ctx.hp, {}))
        assert (series.coefficient(k) - expect).is_zero()


def test_frac_power_expand_cube_root_oracle():
    # random F with (1,1)-leading form a perfect cube
    rng = random.Random(71)
    base = parse("x*y + x + 2")
    F = base ** 3
    ctx = magnus_context(F, parse("y"), Direction(1, 1))
    assert ctx.r % 3 == 0 or ctx.r == 3
    series = frac_power_expand(ctx, F2(1, 3), 4)
    cube = series * series * series
    for k in range(5):
        part = ctx.F_parts.get(ctx.d - k)
        expect = (HLaurent.from_poly(ctx.hp, part) if part is not None
                  else HLaurent(ctx.hp, {}))
        assert (cube.coefficient(k) - expect).is_zero()


def test_frac_power_expand_rejects_non_integral():
    ctx = magnus_context(parse("x + y^2"), parse("y"), Direction(0, 1))
    with pytest.raises(PreconditionError):
        frac_power_expand(ctx, F2(1, 3), 2)


def test_graded_homogeneity_of_coefficients():
    # each t^k coefficient of Ftilde^A is w-homogeneous of degree A*d - k
    F = parse("x^3*y^3 + x^2*y + x + 1")
    w = Direction(1, 1)
    ctx = magnus_context(F, parse("y"), w)
    A = F2(1, ctx.r)
    series = frac_power_expand(ctx, A, 5)
    hdeg = w_deg(ctx.H, w)
    for k in range(6):
        hl = series.coefficient(k)
        base, P = hl.cleared()
        if P.is_zero():
            continue
        degs = {w.weight(xe, ye) for (xe, ye) in P.support()}
        assert degs == {A * ctx.d - k - base * hdeg}


# -- the solver -----------------------------------------------------------


def test_magnus_solve_seed_pair_one():
    report = magnus_solve(parse("y + x^2"), parse("x"), Direction(1, 1))
    assert report.c == [Fraction(1)]
    assert report.verified()
    assert (report.d, report.e, report.r) == (2, 1, 2)
    assert report.H == parse("x")


def test_magnus_solve_seed_pair_two():
    report = magnus_solve(parse("x + y^2"), parse("y"), Direction(0, 1))
    assert report.c == [Fraction(1), Fraction(0)]
    assert report.verified()


def test_magnus_solve_power_pair():
    W = parse("x*y + 1")
    report = magnus_solve(W ** 2, W ** 3, Direction(1, 1))
    assert report.verified()
    assert report.c[0] == 1
    assert all(c == 0 for c in report.c[1:])


def test_magnus_solve_detects_violation():
    # not a Jacobian pair in any approximate sense: G unrelated to F
    F = parse("y + x^2")
    G = parse("x + y^3 + x*y")
    if jacobian(F, G).is_constant():
        pytest.skip("accidentally constant")
    with pytest.raises(PreconditionError):
        magnus_solve(F, G, Direction(1, 1))


def test_magnus_solve_scaled_leading_form():
    # leading coefficient 2 forces the internal monic rescale
    F = parse("x + 2*y^2")
    G = parse("y")
    assert jacobian(F, G).is_constant()
    report = magnus_solve(F, G, Direction(0, 1))
    assert report.f_scale == 2
    assert report.verified()
    assert report.c[0] != 0


def test_magnus_solve_automorphism_pair():
    # x -> x + y^2, then y -> y + x^2, applied to (x, y)
    F = parse("x + y^2")
    G = parse("y + (x + y^2)^2")
    assert jacobian(F, G).is_constant()
    for w in (Direction(1, 1), Direction(0, 1)):
        report = magnus_solve(F, G, w)
        assert report.verified(), (w, report.residuals)


def test_magnus_report_empty_range():
    report = magnus_solve(parse("x"), parse("y"), Direction(1, 1))
    assert report.c == [] and report.verified()


# -- the extended step ------------------------------------------------------


def test_magnus_extended_seed_pair():
    report = magnus_extended(parse("x + y^2"), parse("y"))
    assert report.lam == F2(1, 2)
    assert report.c[0] == 1 and report.c[1] == 0
    assert report.extended_ok
    assert report.lambda_consistent


def test_magnus_extended_commuting_pair():
    W = parse("x^2*y + 1")
    report = magnus_extended(W, W ** 2)
    assert report.lam == 0
    assert report.extended_ok


def test_magnus_extended_rejects_equal_exponents():
    with pytest.raises(PreconditionError):
        magnus_extended(parse("x*y + x"), parse("y"))
    with pytest.raises(PreconditionError):
        magnus_extended(parse("x*y^2 + x^2*y^2"), parse("y"))


def test_magnus_extended_automorphism_pair():
    F = parse("x + y^3")
    G = parse("y + (x + y^3)^2")
    assert jacobian(F, G).is_constant()
    report = magnus_extended(F, G)
    assert report.extended_ok
    jac = jacobian(F, G).constant_value()
    assert report.lam == jac / (3 - 0)


# -- termwise Jacobian vanishing ---------------------------------------------


def test_series_bracket_vanishes_monomial_top():
    # [Ftilde, Ftilde^(l/r)] = 0 termwise for monomial-led F
    rng = random.Random(41)
    w = Direction(0, 1)
    for _ in range(6):
        tail_terms = {
            (F2(rng.randint(0, 2)), F2(rng.randint(0, 2))): F2(
                rng.randint(-3, 3)
            )
            for _ in range(3)
        }
        F = parse("x^2*y^4") + PuiseuxPoly(tail_terms, free_ring())
        if w_deg(F, w) != 4:
            continue
        ctx = magnus_context(F, parse("y"), w)
        T = 5
        for ell in (1, 2, 3, 4):
            series = frac_power_expand(ctx, F2(ell, ctx.r), T)
            ftilde = [
                ctx.F_parts.get(ctx.d - k, PuiseuxPoly.zero(free_ring()))
                for k in range(T + 1)
            ]
            spoly = [series.coefficient(k).to_free_poly() for k in range(T + 1)]
            for total in range(T + 1):
                acc = PuiseuxPoly.zero(free_ring())
                for i in range(total + 1):
                    acc = acc + jacobian(ftilde[i], spoly[total - i])
                assert acc.is_zero()


# -- one-variable rational powers -------------------------------------------


def test_onevar_exact_cube():
    R = onevar_rational_power([1, 1], [0], 2, 3, 8)
    assert R[:4] == [F2(1), F2(3), F2(3), F2(1)]
    assert all(v == 0 for v in R[4:])


def test_onevar_perturbed_has_nonzero_tail():
    R = onevar_rational_power([1, 1], [0, 0, 0, 1], 2, 3, 20)
    assert any(v != 0 for i, v in enumerate(R) if i > 3)


def test_onevar_binomial_series():
    R = onevar_rational_power([1], [0, 1], 2, 3, 6)
    for i in range(7):
        assert R[i] == multinomial(F2(3, 2), [i])


def test_onevar_matches_series_square():
    # oracle: (A^2 + B)^(3/2) squared equals (A^2+B)^3 as truncated series
    rng = random.Random(19)
    for _ in range(10):
        A = [F2(rng.randint(1, 3))] + [
            F2(rng.randint(-2, 2)) for _ in range(2)
        ]
        B = [0, 0, 0] + [F2(rng.randint(-2, 2)) for _ in range(2)]
        T = 12
        R = onevar_rational_power(A, B, 2, 3, T)
        sq = [F2(0)] * (T + 1)
        for i in range(T + 1):
            for j in range(T + 1 - i):
                sq[i + j] += R[i] * R[j]
        from jacpoly.magnus import _ov_mul, _ov_pow

        base = _ov_pow(A, 2, T)
        for i, v in enumerate(B[: T + 1]):
            base[i] += v
        cubed = _ov_pow(base, 3, T)
        assert sq == cubed


# -- weighted multinomials ----------------------------------------------


def _hhat_oracle(ctx, i, wvalues, p, zeta):
    """Direct series oracle: expand sum_j e_j (q^a + z)^((b-j)/a) in 1/y
    and read off the coefficient, then normalize as in the closed form."""
    a, b, s = ctx.a, ctx.b, ctx.s
    qc = [F2(0)] * 2
    qc[1] = p ** (a - s)
    z = [F2(0)] * (s + 1)
    for l in range(s + 1):
        wl = F2(1) if l == s else wvalues[l]
        z[l] = wl * zeta ** (a - l) / p ** ((s - l) * a)
    hs = h_series(
        SpecialCaseContext(a, b, s, ctx.e_coeffs, abar=a, bbar=b),
        qc, z, trunc=4 * (a + b),
    )
    val = hs.get(b - i, PuiseuxPoly.zero(free_ring()))
    scale = p ** (a * i - (a - s) * b) / zeta ** i
    out = val * scale
    if out.is_zero():
        return F2(0)
    return out.constant_value()


def test_hhat_index_convention_against_series():
    # pin the index alignment by brute force at small parameters
    rng = random.Random(91)
    a, b, s = 2, 3, 1
    p, zeta = F2(1), F2(1)
    for _ in range(5):
        w0 = F2(rng.randint(-3, 3))
        e = (F2(1), F2(rng.randint(-2, 2)), F2(0), F2(0), F2(0))
        ctx = SpecialCaseContext(a, b, s, e, prefactor=p ** s / zeta)
        for i in range(0, 5):
            lhs = weighted_multinomial_h(ctx, i, [w0])
            rhs = _hhat_oracle(ctx, i, [w0], p, zeta)
            assert lhs == rhs, (i, lhs, rhs)


def test_hhat_examples():
    ctx = SpecialCaseContext(2, 3, 1, (F2(1), F2(0), F2(0), F2(0), F2(0)))
    # i = 1: only (n0, n1) = (0, 1): multinomial(3/2; 0,1) = 3/2, no x-part
    assert hhat_polynomial(ctx, 1) == {(0,): F2(3, 2)}
    # i = 2: (1,0) gives (3/2) x0 and (0,2) gives 3/8
    assert hhat_polynomial(ctx, 2) == {(1,): F2(3, 2), (0,): F2(3, 8)}
    assert weighted_multinomial_h(ctx, 2, [F2(1)]) == F2(15, 8)
    # all-zero values, i = 0: e_0 * binom(b/a; 0..0) = 1
    assert weighted_multinomial_h(ctx, 0, [F2(0)]) == 1
    # i - j < 0 for all j: empty sum
    ctx_neg = SpecialCaseContext(2, 3, 1, (F2(0), F2(1), F2(0), F2(0), F2(0)))
    assert hhat_polynomial(ctx_neg, 0) == {}


def test_w_weighted_part():
    poly = {(1, 0): F2(1), (1, 1): F2(1)}
    assert w_weighted_part(poly, (2, 1), 3) == {(1, 1): F2(1)}
    assert w_weighted_part(poly, (2, 1), 2) == {(1, 0): F2(1)}
    assert w_weighted_part(poly, (2, 1), 7) == {}
    # the weighted slice at b - i of the index-(b - i) polynomial kills the
    # n_s and j contributions, leaving the plain multinomial sum
    a, b, s = 3, 4, 2
    ctx = SpecialCaseContext(a, b, s, tuple([F2(1)] + [F2(0)] * (a + b - 1)))
    for i in range(-2, 3):
        sliced = w_weighted_part(
            hhat_polynomial(ctx, b - i), (a, a - 1), b - i
        )
        direct = {}
        from jacpoly.magnus import _weighted_compositions, multinomial as mn

        for ns in _weighted_compositions(b - i, [a, a - 1]):
            val = mn(F2(b, a), list(ns))
            if val != 0:
                direct[ns] = val
        assert sliced == direct


def test_recurrence_check_examples():
    # F = y^2, B = y^3, a=2, b=3, j=5: single surviving term has factor 0
    assert recurrence_check([0, 0, 1], {3: F2(1)}, 2, 3, 5) == 0
    # exact rational power: B = (y^2 + x)^(3/2) truncated in 1/y
    x = parse("x")
    ctx = SpecialCaseContext(2, 3, 0, (F2(1), F2(0), F2(0), F2(0), F2(0)))
    B = h_series(ctx, [PuiseuxPoly.zero(free_ring()),
                       PuiseuxPoly.constant(1, free_ring())],
                 [x], trunc=12)
    Fc = [x, 0, F2(1)]
    for j in range(-10, 4):
        assert recurrence_check(Fc, B, 2, 3, j) == 0
    # bumping one coefficient breaks the recurrence somewhere
    Bbad = dict(B)
    some = sorted(Bbad)[2]
    Bbad[some] = Bbad[some] + 1
    assert any(
        not (recurrence_check(Fc, Bbad, 2, 3, j) == 0)
        for j in range(-10, 4)
    )


# -- y-inverse expansions ----------------------------------------------


def test_h_series_monomial_ladder():
    # all z = 0: the expansion is the pure power ladder of q^a
    ctx = SpecialCaseContext(2, 3, 0, (F2(1), F2(0), F2(0), F2(0), F2(0)))
    hs = h_series(ctx, [PuiseuxPoly.zero(free_ring()),
                        PuiseuxPoly.constant(1, free_ring())],
                  [PuiseuxPoly.zero(free_ring())], trunc=8)
    assert set(hs) == {3}
    assert hs[3] == PuiseuxPoly.constant(1, free_ring())


def test_h_series_closed_form_lemma_values():
    # with z_s = 0 and q = y the coefficients are plain multinomial sums
    # over a*n_0 + (a-1)*n_1 = i in the tail variables
    a, b = 3, 4
    rng = random.Random(65)
    for _ in range(4):
        z0, z1 = F2(rng.randint(-3, 3)), F2(rng.randint(-3, 3))
        ctx = SpecialCaseContext(
            a, b, 2, tuple([F2(1)] + [F2(0)] * (a + b - 1))
        )
        # q = y, so q^a = y^a; the inner tail is z1*y + z0 with z_s = 0
        q = [PuiseuxPoly.zero(free_ring()),
             PuiseuxPoly.constant(1, free_ring())]
        hs = h_series(ctx, q, [z0, z1, F2(0)], trunc=10)
        from jacpoly.magnus import _weighted_compositions, multinomial as mn

        for i in range(0, 11):
            got = hs.get(b - i, PuiseuxPoly.zero(free_ring()))
            want = F2(0)
            for ns in _weighted_compositions(i, [a, a - 1]):
                want += mn(F2(b, a), list(ns)) * z0 ** ns[0] * z1 ** ns[1]
            if got.is_zero():
                assert want == 0
            else:
                assert got.constant_value() == want


def test_h_series_e_weights_shift_degree():
    # switching on e_j scales the ladder down by j in the y-exponent
    one = PuiseuxPoly.constant(1, free_ring())
    zero = PuiseuxPoly.zero(free_ring())
    base = SpecialCaseContext(2, 3, 0, (F2(1), 0, 0, 0, 0))
    with_e2 = SpecialCaseContext(2, 3, 0, (F2(1), 0, F2(5), 0, 0))
    h0 = h_series(base, [zero, one], [zero], trunc=6)
    h2 = h_series(with_e2, [zero, one], [zero], trunc=6)
    assert h2[3] == h0[3]
    assert h2[3 - 2] == PuiseuxPoly.constant(5, free_ring())
