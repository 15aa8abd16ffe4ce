import random
from fractions import Fraction

import pytest

from bracketlab.exactalg import (ContextMismatch, LinearSystem, NoSolution,
                                 Polynomial, Solution, VariableContext,
                                 matrix_rank, poly_diff, poly_mul, solve_exact)
from tests.conftest import rpoly


def test_rational_arithmetic_is_exact():
    rng = random.Random(1)
    for _ in range(200):
        a = Fraction(rng.randint(-99, 99), rng.randint(1, 99))
        c = Fraction(rng.randint(-99, 99), rng.randint(1, 99))
        assert (a + c) - c == a
        assert a.denominator > 0


def test_poly_mul_examples():
    ctx = VariableContext(("x", "y"))
    x = Polynomial.variable(ctx, 0)
    y = Polynomial.variable(ctx, 1)
    one = Polynomial.const(ctx, 1)
    assert poly_mul(x + one, x - one) == x * x - one
    p = rpoly(random.Random(2), ctx)
    assert poly_mul(p, one) == p
    assert poly_mul(x + y, x + y) == x * x + x * y.scale(2) + y * y


def test_poly_mul_commutative_associative():
    ctx = VariableContext(("x", "y", "z"))
    rng = random.Random(3)
    for _ in range(50):
        p, q, r = (rpoly(rng, ctx) for _ in range(3))
        assert p * q == q * p
        assert (p * q) * r == p * (q * r)


def test_context_mismatch_raises():
    a = Polynomial.variable(VariableContext(("x",)), 0)
    b = Polynomial.variable(VariableContext(("y",)), 0)
    with pytest.raises(ContextMismatch):
        _ = a * b


def test_poly_diff_examples():
    ctx = VariableContext(("x", "y"))
    x = Polynomial.variable(ctx, 0)
    y = Polynomial.variable(ctx, 1)
    assert poly_diff(x * x * y, 0) == (x * y).scale(2)
    assert poly_diff(x * x, 1).is_zero()
    assert poly_diff(x * y + x, 0) == y + Polynomial.const(ctx, 1)
    with pytest.raises(IndexError):
        poly_diff(x, 5)


def test_leibniz_and_mixed_partials():
    ctx = VariableContext(("x", "y", "z"))
    rng = random.Random(4)
    for _ in range(100):
        p, q = rpoly(rng, ctx, 3), rpoly(rng, ctx, 3)
        i = rng.randrange(3)
        j = rng.randrange(3)
        assert poly_diff(p * q, i) == p * poly_diff(q, i) + q * poly_diff(p, i)
        assert poly_diff(poly_diff(p, i), j) == poly_diff(poly_diff(p, j), i)


def test_solve_exact_identity():
    sys_ = LinearSystem([[1, 0], [0, 1]], [1, 2])
    sol = solve_exact(sys_)
    assert isinstance(sol, Solution)
    assert sol.particular == [1, 2]
    assert sol.null_basis == []
    assert sol.rank == 2


def test_solve_exact_underdetermined():
    sol = solve_exact(LinearSystem([[1, 1]], [0]))
    assert isinstance(sol, Solution)
    assert sol.particular == [0, 0]
    assert len(sol.null_basis) == 1
    v = sol.null_basis[0]
    assert v[0] + v[1] == 0 and v != [0, 0]


def test_solve_exact_inconsistent():
    sol = solve_exact(LinearSystem([[1], [1]], [0, 1]))
    assert isinstance(sol, NoSolution)


def test_solve_exact_residuals_vanish():
    rng = random.Random(5)
    for _ in range(50):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 5)
        m = [[Fraction(rng.randint(-4, 4)) for _ in range(cols)] for _ in range(rows)]
        rhs = [Fraction(rng.randint(-4, 4)) for _ in range(rows)]
        sol = solve_exact(LinearSystem(m, rhs))
        if isinstance(sol, NoSolution):
            continue
        for row, b in zip(m, rhs):
            assert sum(c * v for c, v in zip(row, sol.particular)) == b
        for null in sol.null_basis:
            for row in m:
                assert sum(c * v for c, v in zip(row, null)) == 0


def test_matrix_rank():
    assert matrix_rank([[1, 2], [2, 4]]) == 1
    assert matrix_rank([]) == 0
    assert matrix_rank([[0, 0]]) == 0


def test_poly_printing_roundtrip_order():
    ctx = VariableContext(("x", "y"))
    x = Polynomial.variable(ctx, 0)
    y = Polynomial.variable(ctx, 1)
    p = x * x + x * y.scale(2) - Polynomial.const(ctx, Fraction(3, 2))
    assert str(p) == "x^2 + 2*x*y - 3/2"
