import itertools
import random

import pytest

from bracketlab.exactalg import NoSolution, Polynomial, VariableContext
from bracketlab.poisson import (CompatibilityReport, MagriChain, NotPoisson,
                                PoissonStructure, canonical_on_generators,
                                compatible, d_chain, d_cochain,
                                extended_bracket, hamiltonian,
                                involution_check, is_canonical, jacobi_defect,
                                jacobi_on_generators, lie_p_form, magri_chain,
                                magri_step, poisson_bracket)
from bracketlab.tensorcalc import (Form, Multivector, contract_multi_graded,
                                   de_rham, schouten, sign_pow, wedge_forms,
                                   wedge_multi)
from tests.conftest import rform, rmv, rpoly


def plane(ctx2):
    return wedge_multi(Multivector.basis_field(ctx2, 1),
                       Multivector.basis_field(ctx2, 0))


NON_POISSON_COEFFS = {(0, 1): "y", (0, 2): "z", (1, 2): "x"}


def non_poisson_witness(ctx3):
    names = {"x": 0, "y": 1, "z": 2}
    return Multivector(ctx3, 2, {k: Polynomial.variable(ctx3, names[v])
                                 for k, v in NON_POISSON_COEFFS.items()})


# --- bracket and Jacobi -----------------------------------------------------


def test_poisson_bracket_examples(ctx2, ctx3, so3):
    p = plane(ctx2)
    q = Polynomial.variable(ctx2, 0)
    pp = Polynomial.variable(ctx2, 1)
    assert poisson_bracket(p, q, pp) == Polynomial.const(ctx2, 1)
    rng = random.Random(60)
    a = rpoly(rng, ctx2)
    assert poisson_bracket(p, a, a).is_zero()
    x = Polynomial.variable(ctx3, 0)
    y = Polynomial.variable(ctx3, 1)
    z = Polynomial.variable(ctx3, 2)
    assert poisson_bracket(so3, x, y) == -z


def test_jacobi_defect_examples(ctx3, so3):
    rng = random.Random(61)
    const = Multivector(ctx3, 2, {(0, 1): Polynomial.const(ctx3, 3),
                                  (1, 2): Polynomial.const(ctx3, -2)})
    assert jacobi_defect(const).is_zero()
    assert jacobi_defect(so3).is_zero()
    bad = non_poisson_witness(ctx3)
    defect = jacobi_defect(bad)
    assert not defect.is_zero()
    assert jacobi_on_generators(so3)
    assert not jacobi_on_generators(bad)


def test_three_conditions_agree(ctx3, so3):
    # Jacobi on generators <=> [[P,P]] = 0 <=> boundary^2 = 0 on samples
    rng = random.Random(62)
    corpus = [so3, non_poisson_witness(ctx3)]
    for _ in range(6):
        corpus.append(rmv(rng, ctx3, 2, maxdeg=1))
    for p in corpus:
        schouten_zero = jacobi_defect(p).is_zero()
        assert jacobi_on_generators(p) == schouten_zero
        square_zero = True
        for _ in range(5):
            a = rpoly(rng, ctx3)
            if not schouten(p, schouten(p, Multivector.from_polynomial(a))).is_zero():
                square_zero = False
        if schouten_zero:
            assert square_zero


def test_hamiltonian_examples(ctx2):
    p = plane(ctx2)
    q = Polynomial.variable(ctx2, 0)
    assert hamiltonian(p, q) == Multivector.basis_field(ctx2, 1)
    assert hamiltonian(p, Polynomial.const(ctx2, 5)).is_zero()
    rng = random.Random(63)
    a, b = rpoly(rng, ctx2), rpoly(rng, ctx2)
    assert hamiltonian(p, a + b) == hamiltonian(p, a) + hamiltonian(p, b)
    for _ in range(10):
        c = rpoly(rng, ctx2)
        assert poisson_bracket(p, a, c) == \
            __import__("bracketlab.tensorcalc", fromlist=["mv_evaluate"]).mv_evaluate(
                hamiltonian(p, a), c).as_polynomial()


def test_canonical_derivations(ctx2):
    p = plane(ctx2)
    rng = random.Random(64)
    # every Hamiltonian derivation is canonical
    for _ in range(10):
        a = rpoly(rng, ctx2)
        assert is_canonical(p, hamiltonian(p, a))
    assert is_canonical(p, Multivector.basis_field(ctx2, 0))
    q = Polynomial.variable(ctx2, 0)
    scaling = Multivector.basis_field(ctx2, 0).scale(q)  # q @q
    assert not is_canonical(p, scaling)
    # cross-check agrees with the generator-pair identity
    for x in (Multivector.basis_field(ctx2, 0), scaling, hamiltonian(p, rpoly(rng, ctx2))):
        assert is_canonical(p, x) == canonical_on_generators(p, x)


# --- differentials -----------------------------------------------------------


def test_d_cochain(ctx2):
    ps = PoissonStructure.verify(plane(ctx2))
    q = Polynomial.variable(ctx2, 0)
    assert d_cochain(ps, Multivector.from_polynomial(q)) == \
        Multivector.basis_field(ctx2, 1)
    rng = random.Random(65)
    for _ in range(20):
        a = rpoly(rng, ctx2)
        assert d_cochain(ps, d_cochain(ps, Multivector.from_polynomial(a))).is_zero()
    assert d_cochain(ps, ps.bivector).is_zero()


def test_d_cochain_requires_verified(ctx3):
    bad = PoissonStructure.verify(non_poisson_witness(ctx3))
    assert not bad.verified
    with pytest.raises(NotPoisson):
        d_cochain(bad, Multivector.from_polynomial(Polynomial.const(ctx3, 1)))


def test_d_chain_examples(ctx2, so3):
    ps = PoissonStructure.verify(plane(ctx2))
    q = Polynomial.variable(ctx2, 0)
    qdp = Form(ctx2, 1, {(1,): q})
    assert d_chain(ps, qdp) == Form.from_polynomial(Polynomial.const(ctx2, 1))
    rng = random.Random(66)
    for _ in range(30):
        w = rform(rng, ctx2, rng.randint(0, 2))
        assert d_chain(ps, d_chain(ps, w)).is_zero()
    pso3 = PoissonStructure.verify(so3)
    ctx3 = so3.ctx
    for _ in range(20):
        a, b = rpoly(rng, ctx3), rpoly(rng, ctx3)
        adb = wedge_forms(Form.from_polynomial(a), de_rham(Form.from_polynomial(b)))
        assert d_chain(pso3, adb).as_polynomial() == poisson_bracket(so3, a, b)


def test_d_chain_leibniz_defect_is_extended_bracket(ctx2):
    # d_P is second order: its Leibniz defect is exactly the extended bracket
    ps = PoissonStructure.verify(plane(ctx2))
    rng = random.Random(67)
    q = Polynomial.variable(ctx2, 0)
    w1 = Form(ctx2, 1, {(0,): q})
    w2 = Form.basis_one_form(ctx2, 1)
    leibniz = wedge_forms(d_chain(ps, w1), w2) + \
        wedge_forms(w1, d_chain(ps, w2)).scale(-1)
    assert d_chain(ps, wedge_forms(w1, w2)) != leibniz
    for _ in range(15):
        j, jp = rng.randint(0, 2), rng.randint(0, 2)
        a, b = rform(rng, ctx2, j), rform(rng, ctx2, jp)
        defect = d_chain(ps, wedge_forms(a, b)) \
            - wedge_forms(d_chain(ps, a), b) \
            - wedge_forms(a, d_chain(ps, b)).scale(sign_pow(j))
        assert defect == extended_bracket(ps, a, b).scale(-sign_pow(j))


# --- extended bracket --------------------------------------------------------


def test_extended_bracket_pinned(ctx2):
    ps = PoissonStructure.verify(plane(ctx2))
    q = Polynomial.variable(ctx2, 0)
    dq = Form.basis_one_form(ctx2, 0)
    dp = Form.basis_one_form(ctx2, 1)
    v = extended_bracket(ps, Form.from_polynomial(q), dp)
    assert v == Form.from_polynomial(Polynomial.const(ctx2, -1))
    assert extended_bracket(ps, dq, dp).is_zero()
    # two 0-forms: grading-strict zero of degree -1
    a = extended_bracket(ps, Form.from_polynomial(q), Form.from_polynomial(q))
    assert a.is_zero() and a.degree == -1


def test_extended_bracket_rules_and_laws(ctx3, so3):
    ps = PoissonStructure.verify(so3)
    rng = random.Random(68)
    for _ in range(15):
        a, b = rpoly(rng, ctx3), rpoly(rng, ctx3)
        fa = Form.from_polynomial(a)
        db = de_rham(Form.from_polynomial(b))
        # rule 1 and its consistency with d_P
        assert extended_bracket(ps, fa, db).as_polynomial() == \
            -poisson_bracket(so3, a, b)
        # the exact-exact base carries the Jacobi-forced sign, opposite to
        # the displayed rule
        da = de_rham(fa)
        assert extended_bracket(ps, da, db) == \
            de_rham(Form.from_polynomial(poisson_bracket(so3, a, b))).scale(-1)
    for _ in range(12):
        j, jp, jpp = (rng.randint(0, 2) for _ in range(3))
        w, w1, w2 = rform(rng, ctx3, j), rform(rng, ctx3, jp), rform(rng, ctx3, jpp)
        # rule 3 (right Leibniz) as displayed
        lhs = extended_bracket(ps, w, wedge_forms(w1, w2))
        rhs = wedge_forms(extended_bracket(ps, w, w1), w2) + \
            wedge_forms(w1, extended_bracket(ps, w, w2)).scale(sign_pow((j - 1) * jp))
        assert lhs == rhs
        # graded Jacobi and antisymmetry
        lhs = extended_bracket(ps, w, extended_bracket(ps, w1, w2))
        rhs = extended_bracket(ps, extended_bracket(ps, w, w1), w2) + \
            extended_bracket(ps, w1, extended_bracket(ps, w, w2)).scale(
                sign_pow((j - 1) * (jp - 1)))
        assert lhs == rhs
        anti = extended_bracket(ps, w, w1) + \
            extended_bracket(ps, w1, w).scale(sign_pow((j - 1) * (jp - 1)))
        assert anti.is_zero()


def test_extended_bracket_operator_identity(ctx3, so3):
    ps = PoissonStructure.verify(so3)
    rng = random.Random(69)
    for _ in range(8):
        j, jp = rng.randint(0, 2), rng.randint(0, 2)
        w1, w2 = rform(rng, ctx3, j), rform(rng, ctx3, jp)
        b = extended_bracket(ps, w1, w2)
        s = sign_pow((1 - j) * (1 - jp))
        sd = sign_pow((1 - j) * jp)
        for k in range(ctx3.n + 1):
            x = rmv(rng, ctx3, k)
            assert lie_p_form(ps, b, x) == \
                lie_p_form(ps, w1, lie_p_form(ps, w2, x)) - \
                lie_p_form(ps, w2, lie_p_form(ps, w1, x)).scale(s)
            assert contract_multi_graded(b, x) == \
                lie_p_form(ps, w1, contract_multi_graded(w2, x)) - \
                contract_multi_graded(w2, lie_p_form(ps, w1, x)).scale(sd)


# --- compatible pairs and Magri ----------------------------------------------


def test_compatible_examples(ctx3):
    p = wedge_multi(Multivector.basis_field(ctx3, 0), Multivector.basis_field(ctx3, 1))
    q = wedge_multi(Multivector.basis_field(ctx3, 1), Multivector.basis_field(ctx3, 2))
    rep = compatible(p, q)
    assert rep.compatible
    assert compatible(p, p).compatible
    pencil = p.scale(2) + q.scale(3)
    assert jacobi_defect(pencil).is_zero()


def test_magri_chain_documented(ctx3):
    p = PoissonStructure.verify(
        wedge_multi(Multivector.basis_field(ctx3, 0), Multivector.basis_field(ctx3, 1)))
    q = PoissonStructure.verify(
        wedge_multi(Multivector.basis_field(ctx3, 1), Multivector.basis_field(ctx3, 2)))
    x = Polynomial.variable(ctx3, 0)
    z = Polynomial.variable(ctx3, 2)
    a2 = magri_step(p, q, x, 3)
    assert a2 == -z
    a3 = magri_step(p, q, a2, 3)
    assert a3.is_zero()
    chain = magri_chain(p, q, x, 2, 3)
    assert isinstance(chain, MagriChain)
    assert chain.elements == [x, -z, Polynomial.zero(ctx3)]
    assert chain.links_ok()
    assert involution_check(p, q, chain)


def test_magri_casimir_seed(ctx3):
    p = PoissonStructure.verify(
        wedge_multi(Multivector.basis_field(ctx3, 0), Multivector.basis_field(ctx3, 1)))
    q = PoissonStructure.verify(
        wedge_multi(Multivector.basis_field(ctx3, 1), Multivector.basis_field(ctx3, 2)))
    z = Polynomial.variable(ctx3, 2)
    # z is a Casimir of P: the next element solves the zero equation
    assert hamiltonian(p.bivector, z).is_zero()
    nxt = magri_step(p, q, z, 3)
    assert nxt == Polynomial.zero(ctx3)


def test_magri_incompatible_raises(ctx3):
    z = Polynomial.variable(ctx3, 2)
    y = Polynomial.variable(ctx3, 1)
    p = PoissonStructure.verify(Multivector(ctx3, 2, {(0, 1): z}))
    q = PoissonStructure.verify(Multivector(ctx3, 2, {(1, 2): y}))
    assert p.verified and q.verified
    assert not compatible(p.bivector, q.bivector).compatible
    with pytest.raises(ValueError):
        magri_step(p, q, Polynomial.variable(ctx3, 0), 2)


def test_involution_check_detects_corruption(ctx3):
    p = PoissonStructure.verify(
        wedge_multi(Multivector.basis_field(ctx3, 0), Multivector.basis_field(ctx3, 1)))
    q = PoissonStructure.verify(
        wedge_multi(Multivector.basis_field(ctx3, 1), Multivector.basis_field(ctx3, 2)))
    x = Polynomial.variable(ctx3, 0)
    y = Polynomial.variable(ctx3, 1)
    chain = magri_chain(p, q, x, 2, 3)
    assert involution_check(p, q, chain)
    corrupted = MagriChain(p=p, q=q, elements=chain.elements + [y], degree_cap=3)
    assert poisson_bracket(p.bivector, x, y) == Polynomial.const(ctx3, -1)
    assert not involution_check(p, q, corrupted)
