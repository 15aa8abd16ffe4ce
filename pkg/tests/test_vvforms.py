import itertools
import random

import pytest

from bracketlab.exactalg import Polynomial, VariableContext
from bracketlab.tensorcalc import (Form, Multivector, contract_form, de_rham,
                                   lie_by_multivector, lie_form, schouten,
                                   sign_pow, wedge_forms, wedge_multi)
from bracketlab.vvforms import (BracketProblem, ExtractedElement,
                                NoRepresentative, TargetSpace, VForm,
                                contract_vform_by_vform, d_n, extract_bracket,
                                fn_bracket, is_integrable, lie_by_vform,
                                lie_general, lie_p_by_vform, lie_p_general,
                                monomials_upto, nr_bracket, vv_contract,
                                vv_lie, wedge_form_vform)
from tests.conftest import rform, rmv, rpoly, rvform


# --- contraction and Lie derivative of vector-valued forms -----------------


def test_vv_contract_identity_multiplies_by_degree(ctx3):
    rng = random.Random(30)
    n = VForm.identity(ctx3)
    for j in (1, 2):
        w = rform(rng, ctx3, j)
        assert vv_contract(n, w) == w.scale(j)


def test_vv_contract_basis_example(ctx3):
    # i_{dx # @y}(dy^dz) = dx^dz
    om = VForm(ctx3, 1, 1, {((0,), (1,)): Polynomial.const(ctx3, 1)})
    dydz = wedge_forms(Form.basis_one_form(ctx3, 1), Form.basis_one_form(ctx3, 2))
    assert vv_contract(om, dydz) == \
        wedge_forms(Form.basis_one_form(ctx3, 0), Form.basis_one_form(ctx3, 2))


def test_vv_contract_kills_functions(ctx3):
    rng = random.Random(31)
    om = rvform(rng, ctx3, 1)
    assert vv_contract(om, Form.from_polynomial(rpoly(rng, ctx3))).is_zero()


def test_vv_lie_identity_is_de_rham(ctx3):
    rng = random.Random(32)
    n = VForm.identity(ctx3)
    for j in range(0, 3):
        w = rform(rng, ctx3, j)
        assert vv_lie(n, w) == de_rham(w)


def test_vv_lie_kills_unit_and_commutes_with_d(ctx3):
    rng = random.Random(33)
    for _ in range(20):
        k = rng.randint(0, 2)
        om = rvform(rng, ctx3, k)
        one = Form.from_polynomial(Polynomial.const(ctx3, 1))
        assert vv_lie(om, one).is_zero()
        w = rform(rng, ctx3, rng.randint(0, 2))
        c = vv_lie(om, de_rham(w)) - de_rham(vv_lie(om, w)).scale(sign_pow(k))
        assert c.is_zero()


def test_vv_lie_leibniz_and_module_rule(ctx3):
    rng = random.Random(34)
    for _ in range(20):
        k, j, jp = rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2)
        om = rvform(rng, ctx3, k)
        w1, w2 = rform(rng, ctx3, j), rform(rng, ctx3, jp)
        lhs = vv_lie(om, wedge_forms(w1, w2))
        rhs = wedge_forms(vv_lie(om, w1), w2) + \
            wedge_forms(w1, vv_lie(om, w2)).scale(sign_pow(k * j))
        assert lhs == rhs
        u = rform(rng, ctx3, rng.randint(0, 2))
        lhs = vv_lie(wedge_form_vform(w1, om), u)
        rhs = wedge_forms(w1, vv_lie(om, u)) + \
            wedge_forms(de_rham(w1), vv_contract(om, u)).scale(sign_pow(k + j))
        assert lhs == rhs


# --- FN bracket -----------------------------------------------------------


def test_fn_identity_and_single_variable(ctx3):
    n = VForm.identity(ctx3)
    assert fn_bracket(n, n).is_zero()
    ctx1 = VariableContext(("x",))
    om = VForm(ctx1, 1, 1, {((0,), (0,)): Polynomial.const(ctx1, 1)})
    assert fn_bracket(om, om).is_zero()


def test_fn_antisymmetry_and_jacobi(ctx3):
    rng = random.Random(35)
    for _ in range(15):
        j, jp, jpp = (rng.randint(0, 2) for _ in range(3))
        a, b, c = rvform(rng, ctx3, j), rvform(rng, ctx3, jp), rvform(rng, ctx3, jpp)
        assert (fn_bracket(a, b) + fn_bracket(b, a).scale(sign_pow(j * jp))).is_zero()
        lhs = fn_bracket(a, fn_bracket(b, c))
        rhs = fn_bracket(fn_bracket(a, b), c) + \
            fn_bracket(b, fn_bracket(a, c)).scale(sign_pow(j * jp))
        assert lhs == rhs


def test_fn_operator_characterization(ctx3):
    rng = random.Random(36)
    for _ in range(10):
        j, jp = rng.randint(0, 2), rng.randint(0, 2)
        a, b = rvform(rng, ctx3, j), rvform(rng, ctx3, jp)
        fb = fn_bracket(a, b)
        s = sign_pow(j * jp)
        for k in range(ctx3.n + 1):
            w = rform(rng, ctx3, k)
            assert lie_general(fb, w) == \
                lie_general(a, lie_general(b, w)) - \
                lie_general(b, lie_general(a, w)).scale(s)


def test_fn_module_rule_item3(ctx3):
    rng = random.Random(37)
    for _ in range(15):
        j, i, jp = rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2)
        a, b = rvform(rng, ctx3, j), rvform(rng, ctx3, jp)
        w = rform(rng, ctx3, i)
        lhs = fn_bracket(a, wedge_form_vform(w, b))
        rhs = wedge_form_vform(lie_general(a, w), b) \
            + wedge_form_vform(w, fn_bracket(a, b)).scale(sign_pow(i * j)) \
            - wedge_form_vform(de_rham(w), contract_vform_by_vform(b, a)).scale(
                sign_pow((j + 1) * (i + jp)))
        assert lhs == rhs


def test_fn_item4_holds_at_odd_degrees_with_displayed_sign(ctx3):
    rng = random.Random(38)
    for _ in range(10):
        a, b = rvform(rng, ctx3, 1), rvform(rng, ctx3, 1)
        fb = fn_bracket(a, b)
        c = contract_vform_by_vform(b, a)
        for k in range(ctx3.n + 1):
            w = rform(rng, ctx3, k)
            lhs = lie_general(a, vv_contract(b, w)) - vv_contract(b, lie_general(a, w))
            rhs = lie_general(c, w).scale(-1) + vv_contract(fb, w)
            assert lhs == rhs


def test_fn_item4_universal_form(ctx3):
    # [L_O, i_O'] = -(-1)^{j(j'+1)} L_{i_{O'}O} + i_[[O,O']]; the displayed
    # coefficient (-1)^j is recovered exactly when j and j' are both odd
    rng = random.Random(39)
    for _ in range(12):
        j, jp = rng.randint(0, 2), rng.randint(0, 2)
        a, b = rvform(rng, ctx3, j), rvform(rng, ctx3, jp)
        fb = fn_bracket(a, b)
        c = contract_vform_by_vform(b, a)
        s = sign_pow(j * (jp - 1))
        coeff = -sign_pow(j * (jp + 1))
        for k in range(ctx3.n + 1):
            w = rform(rng, ctx3, k)
            lhs = lie_general(a, vv_contract(b, w)) - \
                vv_contract(b, lie_general(a, w)).scale(s)
            rhs = lie_general(c, w).scale(coeff) + vv_contract(fb, w)
            assert lhs == rhs


def test_fn_item5_distribution(ctx3):
    rng = random.Random(40)
    for _ in range(12):
        j, jp, jpp = (rng.randint(0, 2) for _ in range(3))
        a, b, c = rvform(rng, ctx3, j), rvform(rng, ctx3, jp), rvform(rng, ctx3, jpp)
        lhs = contract_vform_by_vform(a, fn_bracket(b, c))
        rhs = fn_bracket(contract_vform_by_vform(a, b), c) \
            + fn_bracket(b, contract_vform_by_vform(a, c)).scale(sign_pow((j + 1) * jp)) \
            + contract_vform_by_vform(fn_bracket(a, b), c).scale(sign_pow(jp)) \
            - contract_vform_by_vform(fn_bracket(a, c), b).scale(sign_pow((jp + 1) * jpp))
        assert lhs == rhs


# --- NR bracket -----------------------------------------------------------


def test_nr_identity_is_central(ctx3):
    n = VForm.identity(ctx3)
    assert nr_bracket(n, n).is_zero()
    rng = random.Random(41)
    om = rvform(rng, ctx3, 1)
    # i_N O = O and i_O N fixed by basis contractions
    got = nr_bracket(n, om)
    expected = contract_vform_by_vform(n, om) - contract_vform_by_vform(om, n)
    assert got == expected


def test_nr_defining_relation(ctx3):
    rng = random.Random(42)
    for _ in range(12):
        j, jp = rng.randint(1, 2), rng.randint(1, 2)
        a, b = rvform(rng, ctx3, j), rvform(rng, ctx3, jp)
        nb = nr_bracket(a, b)
        s = sign_pow((j - 1) * (jp - 1))
        for k in range(ctx3.n + 1):
            w = rform(rng, ctx3, k)
            lhs = vv_contract(a, vv_contract(b, w)) - \
                vv_contract(b, vv_contract(a, w)).scale(s)
            assert lhs == vv_contract(nb, w)


def test_nr_is_algebraic(ctx3):
    # multiplying coefficients by polynomials commutes with the bracket slots
    rng = random.Random(43)
    a, b = rvform(rng, ctx3, 1), rvform(rng, ctx3, 1)
    f = rpoly(rng, ctx3)
    assert nr_bracket(a.scale(f), b) == nr_bracket(a, b).scale(f)


# --- integrable structures and the bicomplex -------------------------------


def constant_vform_11(rng, ctx):
    coeffs = {}
    for fk in itertools.combinations(range(ctx.n), 1):
        for mk in itertools.combinations(range(ctx.n), 1):
            c = rng.randint(-2, 2)
            if c:
                coeffs[(fk, mk)] = Polynomial.const(ctx, c)
    return VForm(ctx, 1, 1, coeffs)


def test_is_integrable_examples(ctx3):
    rng = random.Random(44)
    assert is_integrable(VForm.identity(ctx3)).integrable
    for _ in range(10):
        n = constant_vform_11(rng, ctx3)
        rep = is_integrable(n)
        assert rep.integrable and rep.defect.is_zero()
    # u dx # @u on Q[x, u]: the decomposable formula gives zero here
    cxu = VariableContext(("x", "u"))
    u = Polynomial.variable(cxu, 1)
    n = VForm(cxu, 1, 1, {((0,), (1,)): u})
    rep = is_integrable(n)
    assert rep.defect == fn_bracket(n, n)


def test_d_n_bicomplex(ctx3):
    rng = random.Random(45)
    corpus = [VForm.identity(ctx3)] + [constant_vform_11(rng, ctx3) for _ in range(3)]
    for n in corpus:
        for _ in range(5):
            w = rform(rng, ctx3, rng.randint(0, 2))
            dn = d_n(n, w)
            assert d_n(n, dn).is_zero()
            dbar = lambda u: de_rham(u) - d_n(n, u)
            assert dbar(dbar(w)).is_zero()
            assert (d_n(n, dbar(w)) + dbar(dn)).is_zero()


def test_d_n_rejects_nonintegrable(ctx3):
    # x dx # @y fails on Q[x,y,z]? build a certified non-integrable witness
    rng = random.Random(46)
    for _ in range(50):
        n = rvform(rng, ctx3, 1)
        if not is_integrable(n).integrable:
            with pytest.raises(ValueError):
                d_n(n, rform(rng, ctx3, 1))
            return
    pytest.skip("no non-integrable sample found")


# --- general Lie actions ----------------------------------------------------


def test_lie_general_consistency(ctx3):
    rng = random.Random(47)
    for _ in range(10):
        X = rmv(rng, ctx3, rng.randint(1, 2))
        om = VForm(ctx3, 0, X.degree,
                   {((), key): p for key, p in X.coeffs.items()})
        w = rform(rng, ctx3, rng.randint(0, 3))
        assert lie_general(om, w) == lie_form(X, w)
        om1 = rvform(rng, ctx3, rng.randint(0, 2))
        assert lie_general(om1, w) == vv_lie(om1, w)


def test_lie_general_d2l2_shape(ctx3):
    om = VForm(ctx3, 2, 2, {(((0, 1)), ((0, 1))): Polynomial.const(ctx3, 1)})
    rng = random.Random(48)
    w = rform(rng, ctx3, 2)
    out = lie_general(om, w)
    expected = vv_contract(om, de_rham(w)) - de_rham(vv_contract(om, w))
    assert out == expected
    if not out.is_zero():
        assert out.degree == w.degree + 1  # shift j - i + 1 = 1


def test_lie_p_general_shapes(ctx3, so3):
    rng = random.Random(49)
    zero = VForm.zero(ctx3, 1, 1)
    X = rmv(rng, ctx3, 1)
    assert lie_p_general(so3, zero, X).is_zero()
    for i in (1, 2):
        om = rvform(rng, ctx3, 1, mdeg=i)
        out = lie_p_general(so3, om, X)
        if not out.is_zero():
            assert out.degree == X.degree + i
    # p = @p^@q on the plane, Omega = dq # @q, X = 1
    ctx2 = VariableContext(("q", "p"))
    p2 = wedge_multi(Multivector.basis_field(ctx2, 1), Multivector.basis_field(ctx2, 0))
    om = VForm(ctx2, 1, 1, {((0,), (0,)): Polynomial.const(ctx2, 1)})
    one = Multivector.from_polynomial(Polynomial.const(ctx2, 1))
    got = lie_p_general(p2, om, one)
    from bracketlab.vvforms import contract_multivector_by_vform
    expected = contract_multivector_by_vform(om, schouten(p2, one)) \
        - schouten(p2, contract_multivector_by_vform(om, one))
    assert got == expected


def test_lie_p_general_requires_poisson(ctx3):
    rng = random.Random(50)
    x = Polynomial.variable(ctx3, 0)
    y = Polynomial.variable(ctx3, 1)
    z = Polynomial.variable(ctx3, 2)
    bad = Multivector(ctx3, 2, {(0, 1): y, (0, 2): z, (1, 2): x})
    assert not schouten(bad, bad).is_zero()
    with pytest.raises(ValueError):
        lie_p_general(bad, rvform(rng, ctx3, 1), rmv(rng, ctx3, 1))


# --- bracket extraction ------------------------------------------------------


def test_extract_bracket_schouten_setting():
    ctx = VariableContext(("x", "y"))
    rng = random.Random(51)
    X, Y = rmv(rng, ctx, 1, maxdeg=1), rmv(rng, ctx, 2, maxdeg=1)
    prob = BracketProblem(lie_by_multivector(X), lie_by_multivector(Y),
                          TargetSpace(("multivector", 2)), 2, ctx)
    res = extract_bracket(prob)
    assert isinstance(res, ExtractedElement)
    assert res.element == schouten(X, Y)


def test_extract_bracket_fn_setting():
    ctx = VariableContext(("x", "y"))
    rng = random.Random(52)
    a, b = rvform(rng, ctx, 1, maxdeg=1), rvform(rng, ctx, 1, maxdeg=1)
    prob = BracketProblem(lie_by_vform(a), lie_by_vform(b),
                          TargetSpace(("vform", 1, 2)), 2, ctx)
    res = extract_bracket(prob)
    assert isinstance(res, ExtractedElement)
    fb = fn_bracket(a, b)
    for j in range(ctx.n + 1):
        for key in itertools.combinations(range(ctx.n), j):
            for m in monomials_upto(ctx, 2):
                w = Form(ctx, j, {key: Polynomial.monomial(ctx, m)})
                assert lie_general(res.element, w) == lie_general(fb, w)


def test_extract_bracket_negative_witness():
    # documented witness: dx#(@x^@y) against x dy#(@x^@y) on Q[x,y] admits no
    # degree-capped representative under the plain de Rham Lie action
    ctx = VariableContext(("x", "y"))
    one = Polynomial.const(ctx, 1)
    x = Polynomial.variable(ctx, 0)
    a = VForm(ctx, 1, 2, {((0,), (0, 1)): one})
    b = VForm(ctx, 1, 2, {((1,), (0, 1)): x})
    prob = BracketProblem(lie_by_vform(a), lie_by_vform(b),
                          TargetSpace(("vform", 2, 1)), 3, ctx)
    res = extract_bracket(prob)
    assert isinstance(res, NoRepresentative)
    assert res.degree_cap == 3
    assert res.witness is not None


def test_extract_bracket_grading_guard():
    ctx = VariableContext(("x", "y"))
    rng = random.Random(53)
    X = rmv(rng, ctx, 1)
    Y = rmv(rng, ctx, 2)
    with pytest.raises(ValueError):
        extract_bracket(BracketProblem(lie_by_multivector(X), lie_by_multivector(Y),
                                       TargetSpace(("multivector", 1)), 2, ctx))


def test_extract_bracket_poisson_setting(ctx3, so3):
    ctx = VariableContext(("x", "y"))
    rng = random.Random(54)
    p = wedge_multi(Multivector.basis_field(ctx, 0), Multivector.basis_field(ctx, 1))
    a = rvform(rng, ctx, 1, maxdeg=0)
    b = rvform(rng, ctx, 1, maxdeg=0)
    prob = BracketProblem(lie_p_by_vform(p, a), lie_p_by_vform(p, b),
                          TargetSpace(("vform", 2, 1), ("poisson", p)), 1, ctx)
    res = extract_bracket(prob)
    assert isinstance(res, (ExtractedElement, NoRepresentative))
