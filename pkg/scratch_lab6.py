"""Test closed-form candidates for FN item 4's first coefficient."""
import itertools
import random

from bracketlab.exactalg import Polynomial, VariableContext
from bracketlab.tensorcalc import Form, de_rham, sign_pow
from bracketlab.vvforms import VForm, contract_vform_by_vform, fn_bracket, vv_contract

rng = random.Random(43)


def rpoly(ctx, maxdeg=2, terms=2):
    out = Polynomial.zero(ctx)
    for _ in range(terms):
        e = [0] * ctx.n
        for _ in range(rng.randint(0, maxdeg)):
            e[rng.randrange(ctx.n)] += 1
        out = out + Polynomial.monomial(ctx, tuple(e), rng.randint(-3, 3))
    return out


def rform(ctx, deg):
    return Form(ctx, deg, {key: rpoly(ctx)
                           for key in itertools.combinations(range(ctx.n), deg)
                           if rng.random() < 0.9})


def rvform(ctx, fdeg):
    coeffs = {}
    for fkey in itertools.combinations(range(ctx.n), fdeg):
        for mkey in itertools.combinations(range(ctx.n), 1):
            if rng.random() < 0.8:
                coeffs[(fkey, mkey)] = rpoly(ctx)
    return VForm(ctx, fdeg, 1, coeffs)


def lie2_v(om, w):
    s = sign_pow(om.fdeg - om.mdeg)
    return vv_contract(om, de_rham(w)) - de_rham(vv_contract(om, w)).scale(s)


for names in [("x", "y", "z"), ("x", "y", "z", "w")]:
    ctx = VariableContext(names)
    print(f"n = {ctx.n}: test [L_O, i_O'] = (-1)^{{j'}} L_{{i_O' O}} + i_[[O,O']]")
    degs = [(j, jp) for j in range(0, 3) for jp in range(0, 4) if jp <= ctx.n and j <= ctx.n]
    for (j, jp) in degs:
        ok = True
        for _ in range(4):
            O1, O2 = rvform(ctx, j), rvform(ctx, jp)
            B = fn_bracket(O1, O2)
            C = contract_vform_by_vform(O2, O1)
            s = sign_pow(j * (jp - 1))
            for ad in range(ctx.n + 1):
                w = rform(ctx, ad)
                lhs = lie2_v(O1, vv_contract(O2, w)) - vv_contract(O2, lie2_v(O1, w)).scale(s)
                rhs = lie2_v(C, w).scale(sign_pow(jp)) + vv_contract(B, w)
                if lhs != rhs:
                    ok = False
        print(f"  (j={j}, j'={jp}): {'OK' if ok else 'FAIL'}")
