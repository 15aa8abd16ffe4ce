"""Poisson/extended-bracket convention lab."""
import itertools
import random
from fractions import Fraction

from bracketlab.exactalg import Polynomial, VariableContext
from bracketlab.tensorcalc import (
    Form, Multivector, contract_form, contract_multi, de_rham, lie_form,
    mv_evaluate, schouten, sign_pow, wedge_forms, wedge_multi,
)
from bracketlab.poisson import (
    PoissonStructure, compatible, d_chain, d_cochain, extended_bracket,
    hamiltonian, involution_check, jacobi_defect, jacobi_on_generators,
    lie_p_form, magri_chain, magri_step, poisson_bracket,
)

rng = random.Random(17)


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


ctx2 = VariableContext(("q", "p"))
ctx3 = VariableContext(("x", "y", "z"))

# canonical P on the plane: @p^@q
Pplane = wedge_multi(Multivector.basis_field(ctx2, 1), Multivector.basis_field(ctx2, 0))
PP = PoissonStructure.verify(Pplane)
q = Polynomial.variable(ctx2, 0)
p = Polynomial.variable(ctx2, 1)
print("{q,p} =", poisson_bracket(Pplane, q, p))
print("ham(q) =", hamiltonian(Pplane, q))

# P_so3
x = Polynomial.variable(ctx3, 0)
y = Polynomial.variable(ctx3, 1)
z = Polynomial.variable(ctx3, 2)
so3 = Multivector(ctx3, 2, {(0, 1): z, (1, 2): x, (0, 2): y.scale(-1)})
print("P_so3 jacobi defect zero:", jacobi_defect(so3).is_zero())
print("P_so3 {x,y} =", poisson_bracket(so3, x, y))
Pso3 = PoissonStructure.verify(so3)
cas = x * x + y * y + z * z
print("Casimir check {x^2+y^2+z^2, x} etc:",
      all(poisson_bracket(so3, cas, v).is_zero() for v in (x, y, z)))

print("d_P(q dp) =", d_chain(PP, Form(ctx2, 1, {(1,): q})), "(want 1)")

print()
print("=== extended bracket: pinned examples ===")
print("{q, dp} =", extended_bracket(PP, Form.from_polynomial(q), Form.basis_one_form(ctx2, 1)), "(want -1)")
print("{dq, dp} =", extended_bracket(PP, Form.basis_one_form(ctx2, 0), Form.basis_one_form(ctx2, 1)), "(want 0)")

print("=== extended bracket: rules 1-3 hold by construction; test 4-6 ===")
def eb(P, w, wp):
    return extended_bracket(P, w, wp)

for P, cc in [(PP, ctx2), (Pso3, ctx3)]:
    biv = P.bivector
    ok4 = ok5 = True
    for _ in range(6):
        degs = [rng.randint(0, min(2, cc.n)) for _ in range(3)]
        w1, w2, w3 = (rform(cc, d) for d in degs)
        j, jp, jpp = degs
        lhs = eb(P, w1, eb(P, w2, w3))
        rhs = eb(P, eb(P, w1, w2), w3) + eb(P, w2, eb(P, w1, w3)).scale(sign_pow((j - 1) * (jp - 1)))
        if lhs != rhs:
            ok4 = False
        anti = eb(P, w1, w2) + eb(P, w2, w1).scale(sign_pow((j - 1) * (jp - 1)))
        if not anti.is_zero():
            ok5 = False
    print(f"  ctx n={cc.n}: Jacobi(4): {'OK' if ok4 else 'FAIL'}; antisym(5): {'OK' if ok5 else 'FAIL'}")

print("=== property 6: L_{{w,w'}} = [L_w, L_w'] with L^P_w = [i_w, dP] ===")
for P, cc in [(PP, ctx2), (Pso3, ctx3)]:
    ok = True
    okflip = True
    for _ in range(5):
        j, jp = rng.randint(0, 2), rng.randint(0, 2)
        w1, w2 = rform(cc, j), rform(cc, jp)
        B = eb(P, w1, w2)
        sc = sign_pow((1 - j) * (1 - jp))
        for k in range(cc.n + 1):
            X = rmv(cc, k)
            lhs = lie_p_form(P, B, X)
            rhs = lie_p_form(P, w1, lie_p_form(P, w2, X)) - \
                lie_p_form(P, w2, lie_p_form(P, w1, X)).scale(sc)
            if lhs != rhs:
                ok = False
    print(f"  ctx n={cc.n}: {'OK' if ok else 'FAIL'}")

print("=== defining relation: i_{{w,w'}} = [L^P_w, i_w'] on multivectors ===")
for P, cc in [(PP, ctx2), (Pso3, ctx3)]:
    ok = True
    for _ in range(5):
        j, jp = rng.randint(0, 2), rng.randint(0, 2)
        w1, w2 = rform(cc, j), rform(cc, jp)
        B = eb(P, w1, w2)
        s = sign_pow((1 - j) * jp)  # |L_w| = 1-j, |i_w'| = -jp
        for k in range(cc.n + 1):
            X = rmv(cc, k)
            lhs = contract_multi(B, X)
            rhs = lie_p_form(P, w1, contract_multi(w2, X)) - \
                contract_multi(w2, lie_p_form(P, w1, X)).scale(s)
            if lhs != rhs:
                ok = False
    print(f"  ctx n={cc.n}: {'OK' if ok else 'FAIL'}")

print("=== d_chain consistency: d_P(a db) = {a,b} = -{a, db} ===")
ok = True
for _ in range(10):
    a, b = rpoly(ctx3), rpoly(ctx3)
    adb = wedge_forms(Form.from_polynomial(a), de_rham(Form.from_polynomial(b)))
    lhs = d_chain(Pso3, adb).as_polynomial()
    if lhs != poisson_bracket(so3, a, b):
        ok = False
    ext = extended_bracket(Pso3, Form.from_polynomial(a), de_rham(Form.from_polynomial(b)))
    if ext.as_polynomial() != poisson_bracket(so3, a, b).scale(-1):
        ok = False
print("  consistency:", "OK" if ok else "FAIL")

print("=== d_P Leibniz counterexample (should be nonzero) ===")
w1 = Form(ctx2, 1, {(0,): q})    # q dq
w2 = Form.basis_one_form(ctx2, 1)  # dp
lhs = d_chain(PP, wedge_forms(w1, w2))
rhs = wedge_forms(d_chain(PP, w1), w2) + wedge_forms(w1, d_chain(PP, w2)).scale(sign_pow(1))
print("  defect d_P(q dq ^ dp) - Leibniz =", lhs - rhs)

print("=== Magri ===")
ctxM = VariableContext(("x", "y", "z"))
Pm = PoissonStructure.verify(wedge_multi(Multivector.basis_field(ctxM, 0), Multivector.basis_field(ctxM, 1)))
Qm = PoissonStructure.verify(wedge_multi(Multivector.basis_field(ctxM, 1), Multivector.basis_field(ctxM, 2)))
print("  compatible:", compatible(Pm.bivector, Qm.bivector).compatible)
a1 = Polynomial.variable(ctxM, 0)
a2 = magri_step(Pm, Qm, a1, 3)
print("  a2 =", a2, "(want -z)")
ch = magri_chain(Pm, Qm, a1, 3, 3)
print("  chain:", [str(e) for e in ch.elements])
print("  links_ok:", ch.links_ok(), " involution:", involution_check(Pm, Qm, ch))
