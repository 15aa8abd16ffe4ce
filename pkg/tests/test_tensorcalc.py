import random

import pytest

from bracketlab.exactalg import Polynomial, VariableContext
from bracketlab.tensorcalc import (Form, Multivector, contract_form,
                                   contract_multi, de_rham, lie_by_multivector,
                                   lie_form, mv_evaluate, schouten,
                                   schouten_oracle, sign_pow, wedge_forms,
                                   wedge_multi)
from tests.conftest import rform, rmv, rpoly


def basis_mv(ctx, *idx):
    out = Multivector.basis_field(ctx, idx[0])
    for i in idx[1:]:
        out = wedge_multi(out, Multivector.basis_field(ctx, i))
    return out


def basis_form(ctx, *idx):
    out = Form.basis_one_form(ctx, idx[0])
    for i in idx[1:]:
        out = wedge_forms(out, Form.basis_one_form(ctx, i))
    return out


# --- wedge products -----------------------------------------------------


def test_wedge_forms_antisymmetry(ctx3):
    dx, dy = Form.basis_one_form(ctx3, 0), Form.basis_one_form(ctx3, 1)
    assert wedge_forms(dy, dx) == wedge_forms(dx, dy).scale(-1)
    assert wedge_forms(dx, dx).is_zero()
    x = Polynomial.variable(ctx3, 0)
    assert wedge_forms(dx.scale(x), dy) == basis_form(ctx3, 0, 1).scale(x)


def test_wedge_multi_examples(ctx3):
    dxm, dym = Multivector.basis_field(ctx3, 0), Multivector.basis_field(ctx3, 1)
    x = Polynomial.variable(ctx3, 0)
    # (@x^@y)(x) = -@y, hand-applied inductive rule
    assert mv_evaluate(wedge_multi(dxm, dym), x) == dym.scale(-1)
    assert wedge_multi(dxm, dxm).is_zero()
    assert wedge_multi(dxm.scale(x), dym) == basis_mv(ctx3, 0, 1).scale(x)


def test_wedge_associative_and_graded_commutative(ctx3):
    rng = random.Random(11)
    for _ in range(30):
        i, j, k = (rng.randint(0, 2) for _ in range(3))
        a, b, c = rform(rng, ctx3, i), rform(rng, ctx3, j), rform(rng, ctx3, k)
        assert wedge_forms(wedge_forms(a, b), c) == wedge_forms(a, wedge_forms(b, c))
        assert wedge_forms(a, b) == wedge_forms(b, a).scale(sign_pow(i * j))
        X, Y, Z = rmv(rng, ctx3, i), rmv(rng, ctx3, j), rmv(rng, ctx3, k)
        assert wedge_multi(wedge_multi(X, Y), Z) == wedge_multi(X, wedge_multi(Y, Z))
        assert wedge_multi(X, Y) == wedge_multi(Y, X).scale(sign_pow(i * j))


def test_wedge_multi_satisfies_inductive_rule(ctx3):
    # (X^Y)(a) = X^Y(a) + (-1)^{deg Y} X(a)^Y
    rng = random.Random(12)
    for _ in range(40):
        i = rng.randint(1, 2)
        j = rng.randint(1, 2)
        X, Y = rmv(rng, ctx3, i), rmv(rng, ctx3, j)
        a = rpoly(rng, ctx3)
        lhs = mv_evaluate(wedge_multi(X, Y), a)
        rhs = wedge_multi(X, mv_evaluate(Y, a)) + \
            wedge_multi(mv_evaluate(X, a), Y).scale(sign_pow(j))
        assert lhs == rhs


# --- evaluation ----------------------------------------------------------


def test_mv_evaluate_examples(ctx3):
    x = Polynomial.variable(ctx3, 0)
    y = Polynomial.variable(ctx3, 1)
    dxdy = basis_mv(ctx3, 0, 1)
    assert mv_evaluate(dxdy, x) == Multivector.basis_field(ctx3, 1).scale(-1)
    assert mv_evaluate(dxdy, y) == Multivector.basis_field(ctx3, 0)
    assert mv_evaluate(Multivector.basis_field(ctx3, 0), x * x) == \
        Multivector.from_polynomial(x.scale(2))
    with pytest.raises(ValueError):
        mv_evaluate(Multivector.from_polynomial(x), x)


def test_mv_evaluate_alternation_and_derivation(ctx3):
    rng = random.Random(13)
    for _ in range(60):
        X = rmv(rng, ctx3, 2)
        a, b = rpoly(rng, ctx3), rpoly(rng, ctx3)
        assert (mv_evaluate(mv_evaluate(X, a), b)
                + mv_evaluate(mv_evaluate(X, b), a)).is_zero()
        # derivation in the argument
        lhs = mv_evaluate(X, a * b)
        rhs = mv_evaluate(X, a).scale(b) + mv_evaluate(X, b).scale(a)
        assert lhs == rhs


# --- de Rham -------------------------------------------------------------


def test_de_rham_examples(ctx3):
    x = Polynomial.variable(ctx3, 0)
    y = Polynomial.variable(ctx3, 1)
    assert de_rham(Form.from_polynomial(x * y)) == \
        Form.basis_one_form(ctx3, 0).scale(y) + Form.basis_one_form(ctx3, 1).scale(x)
    assert de_rham(Form.basis_one_form(ctx3, 1).scale(x)) == basis_form(ctx3, 0, 1)
    rng = random.Random(14)
    for _ in range(40):
        p = rpoly(rng, ctx3, 3)
        assert de_rham(de_rham(Form.from_polynomial(p))).is_zero()
        w = rform(rng, ctx3, rng.randint(0, 3))
        assert de_rham(de_rham(w)).is_zero()


# --- contractions --------------------------------------------------------


def test_contract_form_examples(ctx3):
    dxdy = basis_form(ctx3, 0, 1)
    assert contract_form(Multivector.basis_field(ctx3, 0), dxdy) == \
        Form.basis_one_form(ctx3, 1)
    assert str(contract_form(basis_mv(ctx3, 0, 1), dxdy)) == "-1"
    assert contract_form(Multivector.basis_field(ctx3, 0),
                         Form.basis_one_form(ctx3, 1)).is_zero()


def test_contract_multi_examples(ctx3):
    dx = Form.basis_one_form(ctx3, 0)
    assert contract_multi(dx, basis_mv(ctx3, 0, 1)) == \
        Multivector.basis_field(ctx3, 1).scale(-1)
    assert contract_multi(dx, Multivector.basis_field(ctx3, 1)).is_zero()
    rng = random.Random(15)
    X = rmv(rng, ctx3, 2)
    one = Form.from_polynomial(Polynomial.const(ctx3, 1))
    assert contract_multi(one, X) == X


def test_contract_linear_in_multivector(ctx3):
    rng = random.Random(16)
    for _ in range(30):
        i = rng.randint(1, 2)
        j = rng.randint(i, 3)
        X, Y = rmv(rng, ctx3, i), rmv(rng, ctx3, i)
        w = rform(rng, ctx3, j)
        f = rpoly(rng, ctx3)
        assert contract_form(X + Y, w) == contract_form(X, w) + contract_form(Y, w)
        assert contract_form(X.scale(f), w) == contract_form(X, w).scale(f)


def test_contract_agree_on_equal_degrees(ctx3):
    # both maps are defined when i = j; they must agree there
    rng = random.Random(17)
    for deg in (1, 2, 3):
        for _ in range(20):
            X = rmv(rng, ctx3, deg)
            w = rform(rng, ctx3, deg)
            assert contract_form(X, w).as_polynomial() == \
                contract_multi(w, X).as_polynomial()


def test_degenerate_degrees_give_canonical_zero(ctx3):
    rng = random.Random(18)
    X = rmv(rng, ctx3, 2)
    w = rform(rng, ctx3, 1)
    out = contract_form(X, w)
    assert out.is_zero() and out.degree == -1
    big = wedge_multi(basis_mv(ctx3, 0, 1, 2), Multivector.basis_field(ctx3, 0))
    assert big.is_zero() and big.degree == 4


# --- Lie derivative ------------------------------------------------------


def test_lie_form_examples(ctx3):
    x = Polynomial.variable(ctx3, 0)
    dxm = Multivector.basis_field(ctx3, 0)
    assert lie_form(dxm, Form.basis_one_form(ctx3, 1).scale(x)) == \
        Form.basis_one_form(ctx3, 1)
    assert lie_form(dxm, Form.basis_one_form(ctx3, 0)).is_zero()
    # degree-2 case agrees with the composed-oracle value
    rng = random.Random(19)
    X = rmv(rng, ctx3, 2)
    w = rform(rng, ctx3, 2)
    expected = contract_form(X, de_rham(w)) - de_rham(contract_form(X, w))
    assert lie_form(X, w) == expected


def test_lie_operator_shift(ctx3):
    rng = random.Random(20)
    for i in (1, 2):
        X = rmv(rng, ctx3, i)
        op = lie_by_multivector(X)
        w = rform(rng, ctx3, 2)
        out = op(w)
        assert op.shift == 1 - i
        if not out.is_zero():
            assert out.degree == w.degree + op.shift


# --- Schouten bracket ----------------------------------------------------


def test_schouten_base_cases(ctx3):
    x = Polynomial.variable(ctx3, 0)
    dxm = Multivector.basis_field(ctx3, 0)
    dym = Multivector.basis_field(ctx3, 1)
    one = Multivector.from_polynomial(Polynomial.const(ctx3, 1))
    assert schouten(dxm, Multivector.from_polynomial(x)) == one
    assert schouten(dxm, dym).is_zero()
    # [[a, X]] = (-1)^{deg X} X(a)
    X = basis_mv(ctx3, 0, 1)
    a = Multivector.from_polynomial(x)
    assert schouten(a, X) == mv_evaluate(X, x)
    both_scalars = schouten(a, a)
    assert both_scalars.is_zero() and both_scalars.degree == -1


def test_schouten_so3_self_bracket(ctx3, so3):
    assert schouten(so3, so3).is_zero()
    assert schouten_oracle(so3, so3).is_zero()


def test_schouten_commutator_case(ctx3):
    x = Polynomial.variable(ctx3, 0)
    y = Polynomial.variable(ctx3, 1)
    a = Multivector.basis_field(ctx3, 1).scale(x)   # x@y
    b = Multivector.basis_field(ctx3, 0).scale(y)   # y@x
    expected = Multivector.basis_field(ctx3, 0).scale(x) - \
        Multivector.basis_field(ctx3, 1).scale(y)
    assert schouten(a, b) == expected
    assert schouten_oracle(a, b) == expected


def test_schouten_matches_oracle_randomly(ctx3):
    rng = random.Random(21)
    for (i, j) in [(1, 1), (1, 2), (2, 2), (2, 3), (0, 2), (3, 1)]:
        for _ in range(10):
            X, Y = rmv(rng, ctx3, i), rmv(rng, ctx3, j)
            assert schouten(X, Y) == schouten_oracle(X, Y)


def test_schouten_antisymmetry_jacobi_leibniz(ctx3):
    rng = random.Random(22)
    for _ in range(25):
        i, j, k = (rng.randint(1, 2) for _ in range(3))
        X, Y, Z = rmv(rng, ctx3, i), rmv(rng, ctx3, j), rmv(rng, ctx3, k)
        assert (schouten(X, Y)
                + schouten(Y, X).scale(sign_pow((i - 1) * (j - 1)))).is_zero()
        lhs = schouten(X, schouten(Y, Z))
        rhs = schouten(schouten(X, Y), Z) + \
            schouten(Y, schouten(X, Z)).scale(sign_pow((i - 1) * (j - 1)))
        assert lhs == rhs
        lhs = schouten(X, wedge_multi(Y, Z))
        rhs = wedge_multi(schouten(X, Y), Z) + \
            wedge_multi(Y, schouten(X, Z)).scale(sign_pow((i - 1) * j))
        assert lhs == rhs


def test_schouten_operator_and_contraction_identities(ctx3):
    rng = random.Random(23)
    for _ in range(15):
        i, j = rng.randint(1, 2), rng.randint(1, 2)
        X, Y = rmv(rng, ctx3, i), rmv(rng, ctx3, j)
        B = schouten(X, Y)
        s = sign_pow((1 - i) * (1 - j))
        s5 = sign_pow((1 - i) * j)
        for k in range(ctx3.n + 1):
            w = rform(rng, ctx3, k)
            assert lie_form(B, w) == \
                lie_form(X, lie_form(Y, w)) - lie_form(Y, lie_form(X, w)).scale(s)
            assert contract_form(B, w) == \
                lie_form(X, contract_form(Y, w)) - \
                contract_form(Y, lie_form(X, w)).scale(s5)
