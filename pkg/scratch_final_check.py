"""Final convention verification across all modules before freezing tests."""
import itertools
import random

from bracketlab.exactalg import Polynomial, VariableContext
from bracketlab.tensorcalc import (Form, Multivector, contract_form,
                                   contract_multi, de_rham, lie_form,
                                   mv_evaluate, schouten, schouten_oracle,
                                   sign_pow, wedge_forms, wedge_multi)
from bracketlab.vvforms import (VForm, contract_vform_by_vform, fn_bracket,
                                lie_general, nr_bracket, vv_contract, vv_lie,
                                wedge_form_vform)
from bracketlab.poisson import (PoissonStructure, extended_bracket, lie_p_form,
                                poisson_bracket)

rng = random.Random(987)


def rpoly(cc, maxdeg=2, terms=2):
    out = Polynomial.zero(cc)
    for _ in range(terms):
        e = [0] * cc.n
        for _ in range(rng.randint(0, maxdeg)):
            e[rng.randrange(cc.n)] += 1
        out = out + Polynomial.monomial(cc, tuple(e), rng.randint(-3, 3))
    return out


def rform(cc, deg):
    return Form(cc, deg, {k: rpoly(cc) for k in itertools.combinations(range(cc.n), deg)
                          if rng.random() < 0.9})


def rmv(cc, deg):
    return Multivector(cc, deg, {k: rpoly(cc) for k in itertools.combinations(range(cc.n), deg)
                                 if rng.random() < 0.9})


def rvform(cc, fdeg):
    coeffs = {}
    for fk in itertools.combinations(range(cc.n), fdeg):
        for mk in itertools.combinations(range(cc.n), 1):
            if rng.random() < 0.8:
                coeffs[(fk, mk)] = rpoly(cc)
    return VForm(cc, fdeg, 1, coeffs)


ctx = VariableContext(("x", "y", "z"))
checks = []


def check(name, ok):
    checks.append((name, ok))
    print(f"{'OK  ' if ok else 'FAIL'} {name}")


# --- Schouten cluster ---
ok = True
for (i, ip) in [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 1)]:
    for _ in range(4):
        X, Y = rmv(ctx, i), rmv(ctx, ip)
        B = schouten(X, Y)
        if B != schouten_oracle(X, Y):
            ok = False
        s = sign_pow((1 - i) * (1 - ip))
        s5 = sign_pow((1 - i) * ip)
        for k in range(ctx.n + 1):
            w = rform(ctx, k)
            if lie_form(B, w) != lie_form(X, lie_form(Y, w)) - lie_form(Y, lie_form(X, w)).scale(s):
                ok = False
            if contract_form(B, w) != lie_form(X, contract_form(Y, w)) - contract_form(Y, lie_form(X, w)).scale(s5):
                ok = False
check("schouten: oracle + L-identity + prop5 (stated)", ok)

# pinned values
ok = str(mv_evaluate(wedge_multi(Multivector.basis_field(ctx, 0), Multivector.basis_field(ctx, 1)),
                     Polynomial.variable(ctx, 0))) == "-@y"
dx_dy_f = wedge_forms(Form.basis_one_form(ctx, 0), Form.basis_one_form(ctx, 1))
dxdy_mv = wedge_multi(Multivector.basis_field(ctx, 0), Multivector.basis_field(ctx, 1))
ok = ok and str(contract_form(dxdy_mv, dx_dy_f)) == "-1"
ok = ok and str(contract_form(Multivector.basis_field(ctx, 0), dx_dy_f)) == "dy"
ok = ok and str(contract_multi(Form.basis_one_form(ctx, 0), dxdy_mv)) == "-@y"
check("pinned contraction/evaluation values", ok)

# i = j agreement between the two public contractions
ok = True
for deg in (1, 2, 3):
    for _ in range(4):
        X = rmv(ctx, deg)
        w = rform(ctx, deg)
        a = contract_form(X, w).as_polynomial()
        b = contract_multi(w, X).as_polynomial()
        if a != b:
            ok = False
check("i=j: contract_form agrees with contract_multi", ok)

# L_X pinned examples (Cartan at degree 1)
xpoly = Polynomial.variable(ctx, 0)
xdy = Form(ctx, 1, {(1,): xpoly})
ok = str(lie_form(Multivector.basis_field(ctx, 0), xdy)) == "dy"
ok = ok and lie_form(Multivector.basis_field(ctx, 0), Form.basis_one_form(ctx, 0)).is_zero()
check("lie_form pinned degree-1 values", ok)

# --- FN cluster (final conventions) ---
ok = True
for (j, jp) in [(0, 1), (1, 1), (1, 2), (2, 1), (2, 2)]:
    for _ in range(3):
        A, B2 = rvform(ctx, j), rvform(ctx, jp)
        FB = fn_bracket(A, B2)
        s = sign_pow(j * jp)
        for k in range(ctx.n + 1):
            w = rform(ctx, k)
            if lie_general(FB, w) != lie_general(A, lie_general(B2, w)) - lie_general(B2, lie_general(A, w)).scale(s):
                ok = False
check("FN: decomposable formula vs operator commutator", ok)

N = VForm.identity(ctx)
w1 = rform(ctx, 1)
ok = vv_lie(N, w1) == de_rham(w1) and fn_bracket(N, N).is_zero()
check("identity N: L_N = +d and [[N,N]] = 0", ok)

ok = True
for (k, j) in [(0, 1), (1, 0), (1, 1), (1, 2), (2, 1)]:
    for _ in range(3):
        O = rvform(ctx, k)
        w = rform(ctx, j)
        for ad in range(ctx.n + 1):
            u = rform(ctx, ad)
            lhs = lie_general(wedge_form_vform(w, O), u)
            rhs = wedge_forms(w, lie_general(O, u)) + \
                wedge_forms(de_rham(w), vv_contract(O, u)).scale(sign_pow(k + j))
            if lhs != rhs:
                ok = False
check("FN: module rule as displayed", ok)

ok = True
for (j, i, jp) in [(1, 1, 1), (1, 2, 1), (2, 1, 1), (1, 1, 2), (1, 0, 1), (0, 1, 1)]:
    for _ in range(3):
        O1, O2, w = rvform(ctx, j), rvform(ctx, jp), rform(ctx, i)
        lhs = fn_bracket(O1, wedge_form_vform(w, O2))
        rhs = wedge_form_vform(lie_general(O1, w), O2) \
            + wedge_form_vform(w, fn_bracket(O1, O2)).scale(sign_pow(i * j)) \
            - wedge_form_vform(de_rham(w), contract_vform_by_vform(O2, O1)).scale(sign_pow((j + 1) * (i + jp)))
        if lhs != rhs:
            ok = False
check("FN: proposition item 3 as displayed", ok)

ok = True
for (j, jp) in [(1, 1), (1, 2), (2, 2)]:
    for _ in range(3):
        O1, O2 = rvform(ctx, j), rvform(ctx, jp)
        NB = nr_bracket(O1, O2)
        s = sign_pow((j - 1) * (jp - 1))
        for k in range(ctx.n + 1):
            w = rform(ctx, k)
            if vv_contract(O1, vv_contract(O2, w)) - vv_contract(O2, vv_contract(O1, w)).scale(s) != vv_contract(NB, w):
                ok = False
check("NR: defining relation", ok)

# item 4 stated at odd-odd only
okodd, okmixed = True, False
for _ in range(3):
    O1, O2 = rvform(ctx, 1), rvform(ctx, 1)
    FB = fn_bracket(O1, O2)
    C = contract_vform_by_vform(O2, O1)
    for k in range(ctx.n + 1):
        w = rform(ctx, k)
        lhs = lie_general(O1, vv_contract(O2, w)) - vv_contract(O2, lie_general(O1, w))
        rhs = lie_general(C, w).scale(-1) + vv_contract(FB, w)
        if lhs != rhs:
            okodd = False
check("FN item 4 as displayed at (1,1)", okodd)

# --- Poisson / extended bracket cluster ---
x = Polynomial.variable(ctx, 0)
y = Polynomial.variable(ctx, 1)
z = Polynomial.variable(ctx, 2)
so3 = Multivector(ctx, 2, {(0, 1): z, (1, 2): x, (0, 2): y.scale(-1)})
P = PoissonStructure.verify(so3)
ok = P.verified and poisson_bracket(so3, x, y) == z.scale(-1)
check("P_so3 verified; {x,y} = -z", ok)

ok = True
for _ in range(20):
    j, jp, jpp = rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2)
    a, b, c = rform(ctx, j), rform(ctx, jp), rform(ctx, jpp)
    eb = lambda u, v: extended_bracket(P, u, v)
    if eb(a, eb(b, c)) != eb(eb(a, b), c) + eb(b, eb(a, c)).scale(sign_pow((j - 1) * (jp - 1))):
        ok = False
    if not (eb(a, b) + eb(b, a).scale(sign_pow((j - 1) * (jp - 1)))).is_zero():
        ok = False
    B = eb(a, b)
    sc = sign_pow((1 - j) * (1 - jp))
    for k in range(ctx.n + 1):
        X = rmv(ctx, k)
        if lie_p_form(P, B, X) != lie_p_form(P, a, lie_p_form(P, b, X)) - lie_p_form(P, b, lie_p_form(P, a, X)).scale(sc):
            ok = False
check("extended bracket: Jacobi, antisym, operator identity", ok)

print()
bad = [n for n, o in checks if not o]
print("ALL GREEN" if not bad else f"FAILURES: {bad}")
