"""Shared random element generators for the property suites.

All sampling is seeded per test so runs are reproducible; coefficients are
small integers and polynomial degrees stay at desk scale (n <= 4, degree
<= 4) where every identity is checked exactly.
"""

import itertools
import random

import pytest

from bracketlab.exactalg import Polynomial, VariableContext
from bracketlab.tensorcalc import Form, Multivector
from bracketlab.vvforms import VForm


def rpoly(rng, ctx, maxdeg=2, terms=2):
    out = Polynomial.zero(ctx)
    for _ in range(terms):
        e = [0] * ctx.n
        for _ in range(rng.randint(0, maxdeg)):
            e[rng.randrange(ctx.n)] += 1
        out = out + Polynomial.monomial(ctx, tuple(e), rng.randint(-3, 3))
    return out


def rform(rng, ctx, deg, maxdeg=2, density=0.9):
    return Form(ctx, deg, {
        key: rpoly(rng, ctx, maxdeg)
        for key in itertools.combinations(range(ctx.n), deg)
        if rng.random() < density})


def rmv(rng, ctx, deg, maxdeg=2, density=0.9):
    return Multivector(ctx, deg, {
        key: rpoly(rng, ctx, maxdeg)
        for key in itertools.combinations(range(ctx.n), deg)
        if rng.random() < density})


def rvform(rng, ctx, fdeg, mdeg=1, maxdeg=2, density=0.8):
    coeffs = {}
    for fkey in itertools.combinations(range(ctx.n), fdeg):
        for mkey in itertools.combinations(range(ctx.n), mdeg):
            if rng.random() < density:
                coeffs[(fkey, mkey)] = rpoly(rng, ctx, maxdeg)
    return VForm(ctx, fdeg, mdeg, coeffs)


@pytest.fixture
def ctx2():
    return VariableContext(("q", "p"))


@pytest.fixture
def ctx3():
    return VariableContext(("x", "y", "z"))


@pytest.fixture
def so3(ctx3):
    x = Polynomial.variable(ctx3, 0)
    y = Polynomial.variable(ctx3, 1)
    z = Polynomial.variable(ctx3, 2)
    return Multivector(ctx3, 2, {(0, 1): z, (1, 2): x, (0, 2): y.scale(-1)})


@pytest.fixture
def plane_p(ctx2):
    from bracketlab.tensorcalc import wedge_multi
    return wedge_multi(Multivector.basis_field(ctx2, 1),
                       Multivector.basis_field(ctx2, 0))
