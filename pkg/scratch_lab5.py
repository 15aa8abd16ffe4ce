"""Fit FN item 4 under the flipped Lie convention."""
import itertools
import random
from fractions import Fraction

from bracketlab.exactalg import LinearSystem, NoSolution, Polynomial, VariableContext, solve_exact
from bracketlab.tensorcalc import Form, de_rham, sign_pow
from bracketlab.vvforms import VForm, contract_vform_by_vform, fn_bracket, vv_contract

rng = random.Random(31)


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


def rvform(ctx, fdeg, mdeg=1, maxdeg=2):
    coeffs = {}
    for fkey in itertools.combinations(range(ctx.n), fdeg):
        for mkey in itertools.combinations(range(ctx.n), mdeg):
            if rng.random() < 0.8:
                coeffs[(fkey, mkey)] = rpoly(ctx, maxdeg)
    return VForm(ctx, fdeg, mdeg, coeffs)


def lie2_v(om, w):
    s = sign_pow(om.fdeg - om.mdeg)
    return vv_contract(om, de_rham(w)) - de_rham(vv_contract(om, w)).scale(s)


ctx = VariableContext(("x", "y", "z"))

print("ansatz: [L_O, i_O'] = a*L_{i_{O'}O} + b*i_[[O,O']] + c*L_{i_O O'}")
for (j, jp) in [(1, 1), (1, 2), (2, 1), (2, 2), (0, 1), (1, 0), (2, 0), (0, 2), (2, 3), (1, 3)]:
    eqs = []
    for _ in range(5):
        O1, O2 = rvform(ctx, j), rvform(ctx, jp)
        B = fn_bracket(O1, O2)
        C = contract_vform_by_vform(O2, O1)   # i_{O'} O
        D = contract_vform_by_vform(O1, O2)   # i_O O'
        s = sign_pow(j * (jp - 1))
        for ad in range(ctx.n + 1):
            w = rform(ctx, ad)
            lhs = lie2_v(O1, vv_contract(O2, w)) - vv_contract(O2, lie2_v(O1, w)).scale(s)
            tA = lie2_v(C, w)
            tB = vv_contract(B, w)
            tC = lie2_v(D, w)
            keys = set(lhs.coeffs) | set(tA.coeffs) | set(tB.coeffs) | set(tC.coeffs)
            for key in keys:
                for poly_src in ():
                    pass
                lp = lhs.coeffs.get(key, Polynomial.zero(ctx))
                ap = tA.coeffs.get(key, Polynomial.zero(ctx))
                bp = tB.coeffs.get(key, Polynomial.zero(ctx))
                cp = tC.coeffs.get(key, Polynomial.zero(ctx))
                monos = set(lp.terms) | set(ap.terms) | set(bp.terms) | set(cp.terms)
                for mn in monos:
                    eqs.append((ap.terms.get(mn, Fraction(0)),
                                bp.terms.get(mn, Fraction(0)),
                                cp.terms.get(mn, Fraction(0)),
                                lp.terms.get(mn, Fraction(0))))
    sol = solve_exact(LinearSystem([[e[0], e[1], e[2]] for e in eqs], [e[3] for e in eqs]))
    if isinstance(sol, NoSolution):
        print(f"  (j={j}, j'={jp}): NO fit")
    else:
        a, b, c = sol.particular
        print(f"  (j={j}, j'={jp}): a={a}, b={b}, c={c}, free={len(sol.null_basis)}; "
              f"stated a={sign_pow(j)}, b=1, c=0")
