"""Development scratch: measure convention-sensitive identities across degrees.

Not part of the package; deleted before finishing.
"""
import itertools
import random
from fractions import Fraction

from bracketlab.exactalg import Polynomial, VariableContext
from bracketlab.tensorcalc import (
    Form, Multivector, contract_form, contract_multi, de_rham, lie_form,
    mv_evaluate, schouten, schouten_oracle, wedge_forms, wedge_multi, sign_pow,
)

rng = random.Random(7)


def rpoly(ctx, maxdeg=2, terms=3):
    out = Polynomial.zero(ctx)
    for _ in range(terms):
        e = [0] * ctx.n
        for _ in range(rng.randint(0, maxdeg)):
            e[rng.randrange(ctx.n)] += 1
        c = rng.randint(-3, 3)
        out = out + Polynomial.monomial(ctx, tuple(e), c)
    return out


def rmv(ctx, deg, maxdeg=2):
    coeffs = {}
    for key in itertools.combinations(range(ctx.n), deg):
        if rng.random() < 0.8:
            coeffs[key] = rpoly(ctx, maxdeg, 2)
    return Multivector(ctx, deg, coeffs)


def rform(ctx, deg, maxdeg=2):
    coeffs = {}
    for key in itertools.combinations(range(ctx.n), deg):
        if rng.random() < 0.8:
            coeffs[key] = rpoly(ctx, maxdeg, 2)
    return Form(ctx, deg, coeffs)


def L(x, w):
    return lie_form(x, w)


def graded_comm_L(x, y, w):
    # [L_X, L_Y] with |L_X| = 1 - deg X
    s = sign_pow((1 - x.degree) * (1 - y.degree))
    return L(x, L(y, w)) - L(y, L(x, w)).scale(s)


ctx3 = VariableContext(("x", "y", "z"))

print("=== operator identity L_[[X,X']] = [L_X, L_X'] ===")
for (i, ip) in [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 1), (1, 3), (3, 2)]:
    ok = True
    for trial in range(6):
        X = rmv(ctx3, i)
        Y = rmv(ctx3, ip)
        B = schouten(X, Y)
        for j in range(0, ctx3.n + 1):
            w = rform(ctx3, j)
            lhs = L(B, w)
            rhs = graded_comm_L(X, Y, w)
            if lhs != rhs:
                ok = False
    print(f"  degrees ({i},{ip}): {'OK' if ok else 'FAIL'}")

print("=== schouten == schouten_oracle ===")
for (i, ip) in [(1, 1), (1, 2), (2, 2), (2, 3), (0, 2), (2, 0), (3, 2)]:
    ok = all(schouten(rmv(ctx3, i), rmv(ctx3, ip)) == schouten_oracle(rmv2, rmv3)
             for _ in range(4)
             for rmv2, rmv3 in [(rmv(ctx3, i), rmv(ctx3, ip))])
    # simpler honest check
    ok = True
    for _ in range(6):
        X, Y = rmv(ctx3, i), rmv(ctx3, ip)
        if schouten(X, Y) != schouten_oracle(X, Y):
            ok = False
    print(f"  degrees ({i},{ip}): {'OK' if ok else 'FAIL'}")

print("=== graded antisymmetry [[X,Y]] + (-1)^{(i-1)(i'-1)}[[Y,X]] = 0 ===")
for (i, ip) in [(1, 1), (1, 2), (2, 2), (2, 3), (3, 1)]:
    ok = True
    for _ in range(6):
        X, Y = rmv(ctx3, i), rmv(ctx3, ip)
        s = sign_pow((i - 1) * (ip - 1))
        if not (schouten(X, Y) + schouten(Y, X).scale(s)).is_zero():
            ok = False
    print(f"  degrees ({i},{ip}): {'OK' if ok else 'FAIL'}")

print("=== graded Jacobi ===")
for (i, ip, ipp) in [(1, 1, 1), (1, 2, 1), (2, 2, 1), (2, 1, 2), (1, 2, 2)]:
    ok = True
    for _ in range(4):
        X, Y, Z = rmv(ctx3, i), rmv(ctx3, ip), rmv(ctx3, ipp)
        lhs = schouten(X, schouten(Y, Z))
        rhs = schouten(schouten(X, Y), Z) + schouten(Y, schouten(X, Z)).scale(
            sign_pow((i - 1) * (ip - 1)))
        if lhs != rhs:
            ok = False
    print(f"  degrees ({i},{ip},{ipp}): {'OK' if ok else 'FAIL'}")

print("=== wedge Leibniz [[X, Y^Z]] = [[X,Y]]^Z + (-1)^{(i-1)i'} Y^[[X,Z]] ===")
for (i, ip, ipp) in [(1, 1, 1), (2, 1, 1), (2, 1, 2), (1, 2, 1), (3, 1, 1)]:
    ok = True
    for _ in range(4):
        X, Y, Z = rmv(ctx3, i), rmv(ctx3, ip), rmv(ctx3, ipp)
        lhs = schouten(X, wedge_multi(Y, Z))
        rhs = wedge_multi(schouten(X, Y), Z) + \
            wedge_multi(Y, schouten(X, Z)).scale(sign_pow((i - 1) * ip))
        if lhs != rhs:
            ok = False
    print(f"  degrees ({i},{ip},{ipp}): {'OK' if ok else 'FAIL'}")

print("=== prop 5 orientations: i_[[X,Y]] vs commutators of L and i ===")
def probe_prop5(i, ip):
    verdicts = {"[L_X,i_Y]": True, "[i_X,L_Y]": True}
    for _ in range(6):
        X, Y = rmv(ctx3, i), rmv(ctx3, ip)
        B = schouten(X, Y)
        for j in range(0, ctx3.n + 1):
            w = rform(ctx3, j)
            lhs = contract_form(B, w)
            # [L_X, i_Y]: |L_X| = 1-i, |i_Y| = -ip
            s1 = sign_pow((1 - i) * ip)  # (-1)^{(1-i)(-ip)} = (-1)^{(1-i) ip}
            rhs1 = lie_form(X, contract_form(Y, w)) - contract_form(Y, lie_form(X, w)).scale(s1)
            # [i_X, L_Y]: |i_X| = -i, |L_Y| = 1-ip
            s2 = sign_pow(i * (1 - ip))
            rhs2 = contract_form(X, lie_form(Y, w)) - lie_form(Y, contract_form(X, w)).scale(s2)
            if lhs != rhs1:
                verdicts["[L_X,i_Y]"] = False
            if lhs != rhs2:
                verdicts["[i_X,L_Y]"] = False
    return verdicts

for (i, ip) in [(1, 0), (1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 1), (0, 1)]:
    v = probe_prop5(i, ip)
    print(f"  degrees ({i},{ip}): stated [L_X,i_Y]: {'OK' if v['[L_X,i_Y]'] else 'FAIL'}; "
          f"alt [i_X,L_Y]: {'OK' if v['[i_X,L_Y]'] else 'FAIL'}")
