"""Tests for direction gradings and the counterclockwise order."""

import random
from fractions import Fraction

import pytest

from jacpoly.errors import PreconditionError
from jacpoly.exactalg import PuiseuxPoly, jacobian, parse
from jacpoly.grading import (
    Direction,
    decompose,
    direction_cmp,
    leading_form,
    w_deg,
)


def rand_poly(rng, max_deg=3, max_terms=5):
    from jacpoly.exactalg import plain_ring

    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            key = (
                Fraction(rng.randint(0, max_deg)),
                Fraction(rng.randint(0, max_deg)),
            )
            terms[key] = Fraction(rng.randint(-5, 5))
        f = PuiseuxPoly(terms, plain_ring())
        if not f.is_zero():
            return f


def test_direction_validation():
    Direction(3, -1)
    with pytest.raises(PreconditionError):
        Direction(2, -4)
    with pytest.raises(PreconditionError):
        Direction(-1, 0)


def test_w_deg_examples():
    f = parse("(x+1)^2*y^4 + (x+1)*y")
    assert w_deg(f, Direction(3, -1)) == 2
    assert w_deg(parse("x^2 + y"), Direction(1, 1)) == 2
    assert w_deg(PuiseuxPoly.zero(), Direction(1, 1)) is None


def test_leading_form_examples():
    f = parse("(x+1)^2*y^4 + (x+1)*y")
    assert leading_form(f, Direction(3, -1)) == parse("x^2*y^4 + x*y")
    assert leading_form(parse("x^2 + y"), Direction(0, 1)) == parse("y")
    m = parse("5*x^3*y")
    assert leading_form(m, Direction(1, 1)) == m
    with pytest.raises(PreconditionError):
        leading_form(PuiseuxPoly.zero(), Direction(1, 0))


def test_decompose_examples():
    parts = decompose(parse("x*y + x"), Direction(0, 1))
    assert parts == {Fraction(1): parse("x*y"), Fraction(0): parse("x")}
    F = parse("(x+1)^2*(y+1)^4 + (x+1)*(y+1)")
    parts = decompose(F, Direction(0, 1))
    assert sorted(parts) == [0, 1, 2, 3, 4]
    rng = random.Random(3)
    for _ in range(20):
        f = rand_poly(rng)
        parts = decompose(f, Direction(1, -2) if rng.random() < 0.5 else Direction(1, 1))
        total = PuiseuxPoly.zero()
        for p in parts.values():
            total = total + p
        assert total == f


def test_w_deg_multiplicative_random():
    rng = random.Random(5)
    for _ in range(30):
        f, g = rand_poly(rng), rand_poly(rng)
        w = Direction(2, 1) if rng.random() < 0.5 else Direction(1, -3)
        assert w_deg(f * g, w) == w_deg(f, w) + w_deg(g, w)
        assert leading_form(f * g, w) == leading_form(f, w) * leading_form(g, w)


def test_jacobian_degree_bound_random():
    rng = random.Random(9)
    w = Direction(1, 1)
    for _ in range(40):
        f, g = rand_poly(rng), rand_poly(rng)
        j = jacobian(f, g)
        if j.is_zero():
            continue
        bound = w_deg(f, w) + w_deg(g, w) - (w.u + w.v)
        assert w_deg(j, w) <= bound
        lead_jac = jacobian(leading_form(f, w), leading_form(g, w))
        if not lead_jac.is_zero():
            assert w_deg(j, w) == bound


def test_direction_cmp_quadrant_order():
    anchor = Direction(1, 0)
    assert direction_cmp(Direction(1, 0), Direction(1, 1), anchor) == -1
    assert direction_cmp(Direction(1, 1), Direction(0, 1), anchor) == -1
    assert direction_cmp(Direction(0, 1), Direction(1, 1), anchor) == 1


def test_direction_cmp_cross_example():
    anchor = Direction(1, -1)
    assert direction_cmp(Direction(3, -1), Direction(1, 0), anchor) == -1


def test_direction_cmp_irreflexive_and_errors():
    anchor = Direction(1, 0)
    for w in (Direction(1, 0), Direction(2, 1), Direction(0, 1)):
        assert direction_cmp(w, w, anchor) == 0
    with pytest.raises(PreconditionError):
        direction_cmp(Direction(0, 1), Direction(-1, 0), anchor)
