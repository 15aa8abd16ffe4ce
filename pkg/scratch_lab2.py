"""Development scratch: FN/NR identity orientation measurements."""
import itertools
import random
from fractions import Fraction

from bracketlab.exactalg import Polynomial, VariableContext
from bracketlab.tensorcalc import (
    Form, Multivector, contract_form, de_rham, lie_form, schouten,
    sign_pow, wedge_forms, wedge_multi,
)
from bracketlab.vvforms import (
    VForm, contract_vform_by_vform, fn_bracket, is_integrable, lie_general,
    nr_bracket, vv_contract, vv_lie, wedge_form_vform,
)

rng = random.Random(11)


def rpoly(ctx, maxdeg=2, terms=2):
    out = Polynomial.zero(ctx)
    for _ in range(terms):
        e = [0] * ctx.n
        for _ in range(rng.randint(0, maxdeg)):
            e[rng.randrange(ctx.n)] += 1
        out = out + Polynomial.monomial(ctx, tuple(e), rng.randint(-3, 3))
    return out


def rform(ctx, deg, maxdeg=2):
    coeffs = {}
    for key in itertools.combinations(range(ctx.n), deg):
        if rng.random() < 0.8:
            coeffs[key] = rpoly(ctx, maxdeg)
    return Form(ctx, deg, coeffs)


def rvform(ctx, fdeg, mdeg=1, maxdeg=2):
    coeffs = {}
    for fkey in itertools.combinations(range(ctx.n), fdeg):
        for mkey in itertools.combinations(range(ctx.n), mdeg):
            if rng.random() < 0.7:
                coeffs[(fkey, mkey)] = rpoly(ctx, maxdeg)
    return VForm(ctx, fdeg, mdeg, coeffs)


ctx = VariableContext(("x", "y", "z"))

print("=== identity N sanity ===")
N = VForm.identity(ctx)
for j in (1, 2):
    w = rform(ctx, j)
    assert vv_contract(N, w) == w.scale(j), "i_N != j*omega"
print("  i_N(w) = j*w ok")
w = rform(ctx, 1)
print("  L_N(w) vs dw:", "L_N = -d" if vv_lie(N, w) == de_rham(w).scale(-1) else "L_N = +d?" if vv_lie(N, w) == de_rham(w) else "NEITHER")
print("  [[N,N]] =", fn_bracket(N, N))

print("=== L_[[O,O']] = [L_O, L_O'] (FN operator identity) ===")
for (j, jp) in [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2)]:
    ok = True
    for _ in range(5):
        O1, O2 = rvform(ctx, j), rvform(ctx, jp)
        B = fn_bracket(O1, O2)
        s = sign_pow(j * jp)  # |L_O| = j
        for k in range(ctx.n + 1):
            w = rform(ctx, k)
            lhs = lie_general(B, w)
            rhs = lie_general(O1, lie_general(O2, w)) - lie_general(O2, lie_general(O1, w)).scale(s)
            if lhs != rhs:
                ok = False
    print(f"  fdegs ({j},{jp}): {'OK' if ok else 'FAIL'}")

print("=== FN antisymmetry [[O,O']] + (-1)^{jj'}[[O',O]] = 0 ===")
for (j, jp) in [(0, 1), (1, 1), (1, 2), (2, 2), (0, 0)]:
    ok = True
    for _ in range(5):
        O1, O2 = rvform(ctx, j), rvform(ctx, jp)
        if not (fn_bracket(O1, O2) + fn_bracket(O2, O1).scale(sign_pow(j * jp))).is_zero():
            ok = False
    print(f"  fdegs ({j},{jp}): {'OK' if ok else 'FAIL'}")

print("=== FN graded Jacobi ===")
for (j, jp, jpp) in [(1, 1, 1), (1, 1, 2), (2, 1, 1), (1, 2, 1), (0, 1, 1)]:
    ok = True
    for _ in range(3):
        O1, O2, O3 = rvform(ctx, j), rvform(ctx, jp), rvform(ctx, jpp)
        lhs = fn_bracket(O1, fn_bracket(O2, O3))
        rhs = fn_bracket(fn_bracket(O1, O2), O3) + \
            fn_bracket(O2, fn_bracket(O1, O3)).scale(sign_pow(j * jp))
        if lhs != rhs:
            ok = False
    print(f"  fdegs ({j},{jp},{jpp}): {'OK' if ok else 'FAIL'}")

print("=== prop item 3: [[O, w^O']] module rule ===")
# [[O, w^O']] = L_O(w)^O' + (-1)^{i j} w^[[O,O']] - (-1)^{(j+1)(i+j')} dw^i_{O'}(O)
for (j, i, jp) in [(1, 1, 1), (1, 2, 1), (2, 1, 1), (1, 1, 2), (1, 0, 1), (2, 2, 1)]:
    ok = True
    for _ in range(4):
        O1, O2, w = rvform(ctx, j), rvform(ctx, jp), rform(ctx, i)
        lhs = fn_bracket(O1, wedge_form_vform(w, O2))
        rhs = wedge_form_vform(lie_general(O1, w), O2) \
            + wedge_form_vform(w, fn_bracket(O1, O2)).scale(sign_pow(i * j)) \
            - wedge_form_vform(de_rham(w), contract_vform_by_vform(O2, O1)).scale(sign_pow((j + 1) * (i + jp)))
        if lhs != rhs:
            ok = False
    print(f"  (j={j}, w-deg={i}, j'={jp}): {'OK' if ok else 'FAIL'}")

print("=== prop item 4: [L_O, i_O'] = (-1)^j L_{i_O' O} + i_[[O,O']] ===")
# try both graded-commutator conventions for [L_O, i_O']
for (j, jp) in [(1, 1), (1, 2), (2, 1), (2, 2), (0, 1), (1, 0)]:
    okA = okB = True
    for _ in range(4):
        O1, O2 = rvform(ctx, j), rvform(ctx, jp)
        B = fn_bracket(O1, O2)
        C = contract_vform_by_vform(O2, O1)  # i_{O'}(O)
        for k in range(ctx.n + 1):
            w = rform(ctx, k)
            # |L_O| = j, |i_O'| = j'-1
            sA = sign_pow(j * (jp - 1))
            lhsA = lie_general(O1, vv_contract(O2, w)) - vv_contract(O2, lie_general(O1, w)).scale(sA)
            rhs = vv_lie(VForm.from_tensor(Form.zero(ctx, 0), Multivector.zero(ctx, 1)), w) if False else None
            rhs = lie_general(C, w).scale(sign_pow(j)) + vv_contract(B, w)
            if lhsA != rhs:
                okA = False
            # flipped commutator [i_O', L_O]
            lhsB = vv_contract(O2, lie_general(O1, w)) - lie_general(O1, vv_contract(O2, w)).scale(sA)
            if lhsB != rhs:
                okB = False
    print(f"  fdegs ({j},{jp}): stated [L_O,i_O']: {'OK' if okA else 'FAIL'};"
          f" flipped: {'OK' if okB else 'FAIL'}")

print("=== prop item 5: i_O [[O',O'']] distribution ===")
for (j, jp, jpp) in [(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2)]:
    ok = True
    for _ in range(4):
        O1, O2, O3 = rvform(ctx, j), rvform(ctx, jp), rvform(ctx, jpp)
        lhs = contract_vform_by_vform(O1, fn_bracket(O2, O3))
        rhs = fn_bracket(contract_vform_by_vform(O1, O2), O3) \
            + fn_bracket(O2, contract_vform_by_vform(O1, O3)).scale(sign_pow((j + 1) * jp)) \
            + contract_vform_by_vform(fn_bracket(O1, O2), O3).scale(sign_pow(jp)) \
            - contract_vform_by_vform(fn_bracket(O1, O3), O2).scale(sign_pow((jp + 1) * jpp))
        if lhs != rhs:
            ok = False
    print(f"  fdegs ({j},{jp},{jpp}): {'OK' if ok else 'FAIL'}")

print("=== L_Omega props 1-3 (Leibniz, [L,d]=0, module rule) ===")
for (k, j, jp) in [(1, 1, 1), (1, 2, 1), (2, 1, 1), (2, 2, 1)]:
    ok1 = ok2 = ok3 = True
    for _ in range(4):
        O1 = rvform(ctx, k)  # D_1(Lambda^k)
        w1, w2 = rform(ctx, j), rform(ctx, jp)
        lhs = vv_lie(O1, wedge_forms(w1, w2))
        rhs = wedge_forms(vv_lie(O1, w1), w2) + wedge_forms(w1, vv_lie(O1, w2)).scale(sign_pow(k * j))
        if lhs != rhs:
            ok1 = False
        # [L_O, d] = 0: |L_O| = k, |d| = 1
        c = vv_lie(O1, de_rham(w1)) - de_rham(vv_lie(O1, w1)).scale(sign_pow(k))
        if not c.is_zero():
            ok2 = False
        # L_{w^O} = w^L_O + (-1)^{k+j} dw ^ i_O   (w in Lambda^j)
        lhs3 = vv_lie(wedge_form_vform(w1, O1), w2)
        rhs3 = wedge_forms(w1, vv_lie(O1, w2)) + wedge_forms(de_rham(w1), vv_contract(O1, w2)).scale(sign_pow(k + j))
        if lhs3 != rhs3:
            ok3 = False
    print(f"  (k={k}, j={j}, j'={jp}): Leibniz {'OK' if ok1 else 'FAIL'}; "
          f"[L,d] {'OK' if ok2 else 'FAIL'}; module {'OK' if ok3 else 'FAIL'}")

print("=== NR defining relation [i_O, i_O'] = i_[O,O']^NR ===")
for (j, jp) in [(1, 1), (1, 2), (2, 1), (2, 2)]:
    ok = True
    for _ in range(4):
        O1, O2 = rvform(ctx, j), rvform(ctx, jp)
        B = nr_bracket(O1, O2)
        s = sign_pow((j - 1) * (jp - 1))
        for k in range(ctx.n + 1):
            w = rform(ctx, k)
            lhs = vv_contract(O1, vv_contract(O2, w)) - vv_contract(O2, vv_contract(O1, w)).scale(s)
            if lhs != vv_contract(B, w):
                ok = False
    print(f"  fdegs ({j},{jp}): {'OK' if ok else 'FAIL'}")

print("=== d_N bicomplex for a couple of integrable N ===")
Ns = [VForm.identity(ctx)]
# constant-coefficient N
coeffs = {}
for fk in itertools.combinations(range(ctx.n), 1):
    for mk in itertools.combinations(range(ctx.n), 1):
        coeffs[(fk, mk)] = Polynomial.const(ctx, rng.randint(-2, 2))
Ns.append(VForm(ctx, 1, 1, coeffs))
for N in Ns:
    rep = is_integrable(N)
    print("  integrable:", rep.integrable, end=" ")
    if rep.integrable:
        ok = True
        for k in range(ctx.n):
            w = rform(ctx, k)
            dn = lambda u: vv_lie(N, u)
            dbar = lambda u: de_rham(u) - dn(u)
            if not dn(dn(w)).is_zero() or not dbar(dbar(w)).is_zero():
                ok = False
            if not (dn(dbar(w)) + dbar(dn(w))).is_zero():
                ok = False
        print("bicomplex:", "OK" if ok else "FAIL")
    else:
        print()
