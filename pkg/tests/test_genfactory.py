"""Tests for corner-ordered solving, decomposition, and generators."""

import random
from fractions import Fraction

import pytest

from jacpoly.errors import PreconditionError
from jacpoly.exactalg import PuiseuxPoly, parse, plain_ring
from jacpoly.genfactory import (
    GeneratorResult,
    QTuple,
    Tschirnhausen,
    corner_order,
    decompose_univariate,
    f_generator,
    inner_poly,
    inner_vertex_report,
    certify_T_membership,
    pre_generator,
    tschirnhausen_normalize,
)
from jacpoly.polygeom import n_prime_regions, support

F_MAIN = parse("(x+1)^2*(y+1)^4 + (x+1)*(y+1)")
U_POLY = parse("x^2*y + x^2 + y")
F_BIG = U_POLY ** 12 + U_POLY ** 4 + 1


def rand_rect_member(rng, m, n):
    """Random polynomial filling the rectangle at (m, n) with corner 1."""
    terms = {
        (Fraction(m), Fraction(n)): Fraction(1),
        (Fraction(m), Fraction(0)): Fraction(rng.randint(1, 4)),
        (Fraction(0), Fraction(n)): Fraction(rng.randint(1, 4)),
    }
    for _ in range(rng.randint(0, 6)):
        key = (Fraction(rng.randint(0, m)), Fraction(rng.randint(0, n)))
        if key not in terms:
            terms[key] = Fraction(rng.randint(-5, 5))
    return PuiseuxPoly(terms, plain_ring())


# -- corner order -------------------------------------------------------


def test_corner_order_starts_at_corner():
    pts = corner_order(2, 4, 2)
    assert pts[0] == (Fraction(1), Fraction(2))
    assert len(pts) == 6
    assert pts[1] == (Fraction(0), Fraction(2))


def test_corner_order_square_case():
    pts = corner_order(2, 2, 2)
    assert pts[0] == (Fraction(1), Fraction(1))
    assert pts.index((Fraction(1), Fraction(1))) < pts.index(
        (Fraction(1), Fraction(0))
    )


def test_corner_order_injective():
    pts = corner_order(6, 6, 2)
    assert len(pts) == len(set(pts)) == 16
    from jacpoly.genfactory import _functional_cmp

    for p, q in zip(pts, pts[1:]):
        assert _functional_cmp(p, q) == 1


def test_corner_order_fractional_grid():
    pts = corner_order(2, 2, 2, xden=2)
    assert len(pts) == 6
    assert pts[0] == (Fraction(1), Fraction(1))
    assert (Fraction(1, 2), Fraction(0)) in pts


# -- pre-generator ------------------------------------------------------


def test_pre_generator_worked_example():
    Q = pre_generator(F_MAIN, 2)
    assert Q == parse("(x+1)*(y+1)^2")


def test_pre_generator_pure_power():
    assert pre_generator(parse("x^4*y^2"), 2) == parse("x^2*y")
    assert pre_generator(parse("x^6*y^3"), 3) == parse("x^2*y")
    F = parse("x^2*y^4 + x^2 + y^4 + x + y")
    assert pre_generator(F, 2) == parse("x*y^2")


def test_pre_generator_big_example():
    Q = pre_generator(F_BIG, 2)
    assert Q == U_POLY ** 6
    zeta = F_BIG - Q ** 2
    assert zeta == U_POLY ** 4 + 1
    _, ndouble = n_prime_regions(2, 24, 12)
    assert not any(ndouble.contains(p) for p in support(zeta))


def test_inner_poly_examples():
    assert inner_poly(F_MAIN, 2) == parse("(x+1)*(y+1)")
    F = parse("x^2*y^4 + x^2 + y^4 + x + y")
    assert inner_poly(F, 2) == F - parse("x*y^2") ** 2
    assert inner_poly(F_BIG, 2) == U_POLY ** 4 + 1


def test_pre_generator_uniqueness_against_sweep_oracle():
    """Order-free oracle: Gauss-Seidel sweeps over all corner equations.

    The sweeps visit the unknowns in plain graded-lex order (not the solving
    order) and repeat until a fixed point; exact verification follows.
    """
    rng = random.Random(101)
    cases = [(2, 2, 2), (2, 4, 2), (4, 4, 2), (3, 6, 3)]
    for m, n, a in cases:
        for _ in range(5):
            F = rand_rect_member(rng, m, n)
            Q = pre_generator(F, a)
            Q2 = sweep_solve(F, m, n, a)
            assert Q == Q2


def sweep_solve(F, m, n, a):
    grid = [
        (Fraction(i), Fraction(j))
        for i in range(m // a + 1)
        for j in range(n // a + 1)
    ]
    grid.sort(key=lambda p: (p[0] + p[1], p[0], p[1]))  # not the solve order
    corner = (Fraction(m, a), Fraction(n, a))
    coeffs = {p: Fraction(0) for p in grid}
    coeffs[corner] = Fraction(1)
    for _ in range(len(grid) + 2):
        changed = False
        for p in grid:
            if p == corner:
                continue
            Q = PuiseuxPoly(coeffs, plain_ring())
            target = (
                (a - 1) * corner[0] + p[0],
                (a - 1) * corner[1] + p[1],
            )
            resid = F.coefficient(*target) - (Q ** a).coefficient(*target)
            if resid != 0:
                coeffs[p] = coeffs[p] + resid / a
                changed = True
        if not changed:
            break
    Q = PuiseuxPoly(coeffs, plain_ring())
    for p in grid:
        target = ((a - 1) * corner[0] + p[0], (a - 1) * corner[1] + p[1])
        assert F.coefficient(*target) == (Q ** a).coefficient(*target)
    return Q


# -- decomposition ------------------------------------------------------


def test_decompose_big_example():
    W, alpha = decompose_univariate(F_BIG)
    assert W == U_POLY
    assert alpha.degree == 12
    assert alpha.full_coeffs() == [Fraction(1)] + [Fraction(0)] * 3 + [
        Fraction(1)
    ] + [Fraction(0)] * 7 + [Fraction(1)]
    assert alpha.apply(W) == F_BIG


def test_decompose_constructed_roundtrip():
    W = parse("x*y + 1")
    f = W ** 3 + W + 1
    W2, alpha = decompose_univariate(f)
    assert alpha.apply(W2) == f
    assert W2 == W
    assert alpha.degree == 3


def test_decompose_principal_case():
    f = parse("x^2*y + y + 1")
    W, alpha = decompose_univariate(f)
    assert W == f and alpha.is_identity()


def test_decompose_random_roundtrip():
    rng = random.Random(55)
    for _ in range(12):
        W = rand_rect_member(rng, rng.choice([1, 2]), rng.choice([1, 2]))
        k = rng.choice([2, 3, 4])
        coeffs = [Fraction(rng.randint(-3, 3)) for _ in range(k - 1)]
        alpha = Tschirnhausen(k, tuple(coeffs))
        f = alpha.apply(W)
        W2, alpha2 = decompose_univariate(f)
        assert alpha2.apply(W2) == f
        assert alpha2.degree % k == 0


def test_decompose_unique_alpha_for_pinned_w():
    # recomposing with the returned generator gives back the same alpha
    W = parse("x*y + x + 1")
    alpha = Tschirnhausen(4, (Fraction(2), Fraction(-1), Fraction(3)))
    f = alpha.apply(W)
    W2, alpha2 = decompose_univariate(f)
    assert alpha2.apply(W2) == f
    f2 = alpha2.apply(W2)
    W3, alpha3 = decompose_univariate(f2)
    assert (W3, alpha3.degree, alpha3.coeffs) == (
        W2, alpha2.degree, alpha2.coeffs
    )


# -- generator bundle ---------------------------------------------------


def test_f_generator_worked_example():
    qt = QTuple(2, 3, 2, 4)
    res = f_generator(F_MAIN, qt)
    assert res.delta == 1
    assert res.beta.is_identity()
    assert res.WF == res.Q == parse("(x+1)*(y+1)^2")
    assert res.e_list == (Fraction(1),)
    assert res.Z == parse("x*y + x + y")
    assert res.inner == parse("(x+1)*(y+1)")


def test_f_generator_big_example():
    qt = QTuple(2, 3, 24, 12)
    res = f_generator(F_BIG, qt)
    assert res.delta == 6
    assert res.WF == U_POLY
    assert res.e_list == (
        Fraction(1), Fraction(0), Fraction(0), Fraction(0), Fraction(1),
        Fraction(0),
    )
    assert res.Z.is_zero()
    assert 6 in res.delta_successes


def test_f_generator_single_offcorner_term():
    qt = QTuple(2, 3, 2, 4)
    res = f_generator(parse("x^2*y^4 + 1"), qt)
    assert res.delta == 1
    assert res.Q == res.WF == parse("x*y^2")
    assert res.e_list == (Fraction(1),)
    assert res.Z.is_zero()
    assert res.wf_fills_rectangle is False


def test_f_generator_reconstruction_random():
    rng = random.Random(77)
    for m, n, a in [(2, 4, 2), (4, 4, 2), (3, 6, 3)]:
        qt = QTuple(a, a + 1 if gcd_ok(a, a + 1) else a + 2, m, n)
        for _ in range(5):
            F = rand_rect_member(rng, m, n)
            res = f_generator(F, qt)
            total = res.Q ** a
            for j, ej in enumerate(res.e_list):
                total = total + res.WF ** j * ej
            total = total + res.Z
            assert total == F
            # no corner-diagonal support left in Z
            for j in range(len(res.e_list)):
                px = Fraction(j * m, a * res.delta)
                py = Fraction(j * n, a * res.delta)
                assert res.Z.coefficient(px, py) == 0
            _, ndouble = n_prime_regions(a, m, n)
            assert not any(
                ndouble.contains(p) for p in support(res.inner)
            )


def gcd_ok(a, b):
    from math import gcd

    return gcd(a, b) == 1


# -- vertex reports -----------------------------------------------------


def test_inner_vertex_report_worked_example():
    report = inner_vertex_report(F_MAIN, QTuple(2, 3, 2, 4))
    inner = report["innermost"]
    assert inner["en"] == (1, 1) and inner["ne"] == (1, 1)
    assert inner["en_eq_ne"]
    assert not inner["in_region"]  # the vertex sits left of the strip
    assert inner["ratio_matches"] is False  # 1/1 != 4/2


def test_inner_vertex_report_zero_case():
    rep = inner_vertex_report(F_BIG, QTuple(2, 3, 24, 12))
    assert rep["swapped_axes"] is True
    assert rep["innermost"]["zero"] is True
    assert "degenerate" in rep["innermost"]["status"]


def test_vertex_entry_split_vertices_flagged():
    from jacpoly.genfactory import _vertex_entry
    from jacpoly.polygeom import RegionR

    synthetic = parse("x^2*y + x*y^2")
    entry = _vertex_entry(synthetic, RegionR(2, 3, 2, 4))
    assert entry["en"] == (2, 1) and entry["ne"] == (1, 2)
    assert entry["en_eq_ne"] is False


# -- reduced-class certificates -----------------------------------------


def test_certify_first_bullets():
    checks = certify_T_membership(parse("x^2*y^4 + x"), 2, 4, 2, 3)
    assert checks["corner_in_polygon"]
    assert checks["top_slice_is_corner_monomial"]
    assert checks["subtop_slice_vanishes"]


def test_certify_worked_example_fails_subtop():
    checks = certify_T_membership(F_MAIN, 2, 4, 2, 3)
    assert not checks["subtop_slice_vanishes"]
    assert checks["ok"] is False


def test_certify_zero_inner():
    checks = certify_T_membership(parse("x^2*y^4"), 2, 4, 2, 3)
    assert checks["inner_top_slice"] == "inner polynomial vanishes"
    assert checks["ok"] is True


# -- Tschirnhausen normalization ----------------------------------------


def test_tschirnhausen_normalize_examples():
    alpha_p, W_p = tschirnhausen_normalize(
        [Fraction(1), Fraction(2), Fraction(1)], parse("x*y")
    )
    assert alpha_p.degree == 2 and alpha_p.coeffs == (Fraction(0),)
    assert W_p == parse("x*y + 1")
    assert alpha_p.apply(W_p) == parse("(x*y+1)^2")

    alpha0 = Tschirnhausen(3, (Fraction(2), Fraction(0)))
    W = parse("x + y")
    alpha_p, W_p = tschirnhausen_normalize(alpha0.full_coeffs(), W)
    assert (alpha_p.degree, alpha_p.coeffs) == (3, (Fraction(2), Fraction(0)))
    assert W_p == W

    alpha_p, W_p = tschirnhausen_normalize(
        [Fraction(1), Fraction(3), Fraction(3), Fraction(1)],
        PuiseuxPoly.variable("y"),
    )
    assert alpha_p.degree == 3 and alpha_p.coeffs == (Fraction(0), Fraction(0))
    assert W_p == parse("y + 1")

    with pytest.raises(PreconditionError):
        tschirnhausen_normalize([Fraction(1), Fraction(2)], parse("x"))
