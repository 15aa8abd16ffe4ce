"""Re-measure all convention-sensitive identities with L = [i_X, d]."""
import itertools
import random
from fractions import Fraction

from bracketlab.exactalg import Polynomial, VariableContext
from bracketlab.tensorcalc import (
    Form, Multivector, contract_form, contract_multi, de_rham, schouten,
    sign_pow, wedge_forms, wedge_multi,
)
from bracketlab.vvforms import (
    VForm, contract_vform_by_vform, fn_bracket, nr_bracket, vv_contract,
    wedge_form_vform,
)

rng = random.Random(5)


def rpoly(ctx, maxdeg=2, terms=2):
    out = Polynomial.zero(ctx)
    for _ in range(terms):
        e = [0] * ctx.n
        for _ in range(rng.randint(0, maxdeg)):
            e[rng.randrange(ctx.n)] += 1
        out = out + Polynomial.monomial(ctx, tuple(e), rng.randint(-3, 3))
    return out


def rform(ctx, deg, maxdeg=2):
    return Form(ctx, deg, {key: rpoly(ctx, maxdeg)
                           for key in itertools.combinations(range(ctx.n), deg)
                           if rng.random() < 0.9})


def rmv(ctx, deg, maxdeg=2):
    return Multivector(ctx, deg, {key: rpoly(ctx, maxdeg)
                                  for key in itertools.combinations(range(ctx.n), deg)
                                  if rng.random() < 0.9})


def rvform(ctx, fdeg, mdeg=1, maxdeg=2):
    coeffs = {}
    for fkey in itertools.combinations(range(ctx.n), fdeg):
        for mkey in itertools.combinations(range(ctx.n), mdeg):
            if rng.random() < 0.8:
                coeffs[(fkey, mkey)] = rpoly(ctx, maxdeg)
    return VForm(ctx, fdeg, mdeg, coeffs)


# flipped Lie derivative: L_X = i_X d - (-1)^i d i_X  (= [i_X, d])
def lie2(x, w):
    i = x.degree
    return contract_form(x, de_rham(w)) - de_rham(contract_form(x, w)).scale(sign_pow(i))


def lie2_v(om, w):
    # [i_Omega, d] with |i_Omega| = fdeg - mdeg
    s = sign_pow(om.fdeg - om.mdeg)
    return vv_contract(om, de_rham(w)) - de_rham(vv_contract(om, w)).scale(s)


ctx = VariableContext(("x", "y", "z"))
ctx4 = VariableContext(("x", "y", "z", "w"))

print("=== Schouten operator identity with flipped L ===")
for (i, ip) in [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 1), (1, 3)]:
    ok = True
    for _ in range(5):
        X, Y = rmv(ctx, i), rmv(ctx, ip)
        B = schouten(X, Y)
        s = sign_pow((1 - i) * (1 - ip))
        for k in range(ctx.n + 1):
            w = rform(ctx, k)
            if lie2(B, w) != lie2(X, lie2(Y, w)) - lie2(Y, lie2(X, w)).scale(s):
                ok = False
    print(f"  ({i},{ip}): {'OK' if ok else 'FAIL'}")

print("=== Schouten prop 5 with flipped L: i_[[X,Y]] = [L_X, i_Y] ===")
for (i, ip) in [(1, 0), (0, 1), (1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 1)]:
    ok = True
    for _ in range(5):
        X, Y = rmv(ctx, i), rmv(ctx, ip)
        B = schouten(X, Y)
        s = sign_pow((1 - i) * ip)  # (-1)^{|L_X| |i_Y|}
        for k in range(ctx.n + 1):
            w = rform(ctx, k)
            lhs = contract_form(B, w)
            rhs = lie2(X, contract_form(Y, w)) - contract_form(Y, lie2(X, w)).scale(s)
            if lhs != rhs:
                ok = False
    print(f"  ({i},{ip}): {'OK' if ok else 'FAIL'}")

print("=== d_P properties with flipped L (d_P = L_P) ===")
# P = @p^@q on Q[q,p]
ctx2 = VariableContext(("q", "p"))
P = wedge_multi(Multivector.basis_field(ctx2, 1), Multivector.basis_field(ctx2, 0))
q = Polynomial.variable(ctx2, 0)
p = Polynomial.variable(ctx2, 1)


def dP(w):
    return lie2(P, w)


qdp = Form(ctx2, 1, {(1,): q})
print("  d_P(q dp) =", dP(qdp), " (want {q,p} = 1)")
ok = True
for _ in range(30):
    w = rform(ctx2, rng.randint(0, 2))
    if not dP(dP(w)).is_zero():
        ok = False
print("  d_P^2 = 0:", "OK" if ok else "FAIL")

print("=== FN identities with flipped vv-Lie ===")
print(" operator identity L_[[O,O']] = [L_O, L_O']:")
for (j, jp) in [(0, 1), (1, 1), (1, 2), (2, 1), (2, 2)]:
    ok = True
    for _ in range(4):
        O1, O2 = rvform(ctx, j), rvform(ctx, jp)
        B = fn_bracket(O1, O2)
        s = sign_pow(j * jp)
        for k in range(ctx.n + 1):
            w = rform(ctx, k)
            if lie2_v(B, w) != lie2_v(O1, lie2_v(O2, w)) - lie2_v(O2, lie2_v(O1, w)).scale(s):
                ok = False
    print(f"  ({j},{jp}): {'OK' if ok else 'FAIL'}")

print(" module rule L_{w^O} = w^L_O + (-1)^{k+j} dw^i_O:")
for (k, j) in [(0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2), (0, 0)]:
    cc = ctx4 if k + j >= 3 else ctx
    ok = True
    for _ in range(4):
        O = rvform(cc, k)
        w = rform(cc, j)
        for ad in range(0, cc.n + 1):
            u = rform(cc, ad)
            lhs = lie2_v(wedge_form_vform(w, O), u)
            rhs = wedge_forms(w, lie2_v(O, u)) + \
                wedge_forms(de_rham(w), vv_contract(O, u)).scale(sign_pow(k + j))
            if lhs != rhs:
                ok = False
    print(f"  (k={k}, j={j}): {'OK' if ok else 'FAIL'}")

print(" Leibniz L_O(w^w') = L_O(w)^w' + (-1)^{kj} w^L_O(w'):")
for (k, j, jp) in [(1, 1, 1), (1, 2, 1), (2, 1, 1), (2, 2, 1), (2, 1, 2)]:
    ok = True
    for _ in range(4):
        O = rvform(ctx, k)
        w1, w2 = rform(ctx, j), rform(ctx, jp)
        lhs = lie2_v(O, wedge_forms(w1, w2))
        rhs = wedge_forms(lie2_v(O, w1), w2) + wedge_forms(w1, lie2_v(O, w2)).scale(sign_pow(k * j))
        if lhs != rhs:
            ok = False
    print(f"  (k={k}, j={j}, j'={jp}): {'OK' if ok else 'FAIL'}")

print(" [L_O, d] = 0:")
for k in (1, 2):
    ok = True
    for _ in range(4):
        O = rvform(ctx, k)
        for ad in range(ctx.n + 1):
            w = rform(ctx, ad)
            c = lie2_v(O, de_rham(w)) - de_rham(lie2_v(O, w)).scale(sign_pow(k))
            if not c.is_zero():
                ok = False
    print(f"  k={k}: {'OK' if ok else 'FAIL'}")

print(" item 3 [[O, w^O']] = L_O(w)^O' + (-1)^{ij} w^[[O,O']] - (-1)^{(j+1)(i+j')} dw^i_{O'}(O):")
for (j, i, jp) in [(1, 1, 1), (1, 2, 1), (2, 1, 1), (1, 1, 2), (1, 0, 1), (2, 2, 1), (0, 1, 1)]:
    cc = ctx4 if i + j + jp >= 4 else ctx
    ok = True
    for _ in range(4):
        O1, O2, w = rvform(cc, j), rvform(cc, jp), rform(cc, i)
        lhs = fn_bracket(O1, wedge_form_vform(w, O2))
        rhs = wedge_form_vform(lie2_v(O1, w), O2) \
            + wedge_form_vform(w, fn_bracket(O1, O2)).scale(sign_pow(i * j)) \
            - wedge_form_vform(de_rham(w), contract_vform_by_vform(O2, O1)).scale(sign_pow((j + 1) * (i + jp)))
        if lhs != rhs:
            ok = False
    print(f"  (j={j}, i={i}, j'={jp}): {'OK' if ok else 'FAIL'}")

print(" item 4 [L_O, i_O'] = (-1)^j L_{i_O' O} + i_[[O,O']]:")
for (j, jp) in [(1, 1), (1, 2), (2, 1), (2, 2), (0, 1), (1, 0), (2, 0), (0, 2)]:
    ok = True
    for _ in range(4):
        O1, O2 = rvform(ctx, j), rvform(ctx, jp)
        B = fn_bracket(O1, O2)
        C = contract_vform_by_vform(O2, O1)
        s = sign_pow(j * (jp - 1))
        for ad in range(ctx.n + 1):
            w = rform(ctx, ad)
            lhs = lie2_v(O1, vv_contract(O2, w)) - vv_contract(O2, lie2_v(O1, w)).scale(s)
            rhs = lie2_v(C, w).scale(sign_pow(j)) + vv_contract(B, w)
            if lhs != rhs:
                ok = False
    print(f"  ({j},{jp}): {'OK' if ok else 'FAIL'}")

print(" identity N: L'_N vs d:")
N = VForm.identity(ctx)
w = rform(ctx, 1)
print("  L'_N = +d:", lie2_v(N, w) == de_rham(w), "; L'_N = -d:", lie2_v(N, w) == de_rham(w).scale(-1))
