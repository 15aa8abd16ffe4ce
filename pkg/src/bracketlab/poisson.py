"""Poisson structures: bracket, Jacobi certificates, (co)boundary operators,
the extended bracket on forms, compatible pairs and Magri chains.

A bivector P defines {a,b}_P = P(a,b); it is Poisson exactly when the
Schouten self-bracket [[P,P]] vanishes, which is the finitely checkable form
of the Jacobi identity here (Jacobi on generator triples is kept as a
cross-check).  The cochain differential is [[P, .]] and the chain
differential is the Lie derivative by P, realized as [i_P, d] so that
d_P(a db) = {a,b}_P holds on the nose.

The extended bracket on forms is built constructively from

    {a, db} = -{a,b}     {da, db} = d{a,b}
    {w, w'^w''} = {w,w'}^w'' + (-1)^{(j-1) j'} w'^{w,w''}

together with graded antisymmetry to peel the left argument; the bracket of
two 0-forms is the zero element of degree -1 (grading-strict choice; the
function-level bracket is poisson_bracket).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .exactalg import (
    LinearSystem,
    NoSolution,
    Polynomial,
    Solution,
    VariableContext,
    check_same_context,
    solve_exact,
)
from .tensorcalc import (
    Form,
    Multivector,
    contract_form,
    de_rham,
    lie_form,
    mv_evaluate,
    schouten,
    sign_pow,
    wedge_forms,
)
from .vvforms import monomials_upto


class NotPoisson(ValueError):
    """Raised when an operation requires a verified Poisson structure."""


@dataclass(frozen=True)
class PoissonStructure:
    """A degree-2 multivector together with its Jacobi certificate."""

    bivector: Multivector
    verified: bool

    @staticmethod
    def verify(p: Multivector) -> "PoissonStructure":
        if p.degree != 2:
            raise ValueError("a Poisson structure is a bivector")
        return PoissonStructure(bivector=p, verified=schouten(p, p).is_zero())

    def require(self) -> Multivector:
        if not self.verified:
            raise NotPoisson("bivector fails [[P,P]] = 0")
        return self.bivector


def _as_bivector(p) -> Multivector:
    if isinstance(p, PoissonStructure):
        return p.bivector
    return p


def poisson_bracket(p, a: Polynomial, b: Polynomial) -> Polynomial:
    """{a,b}_P = P(a,b); a biderivation, antisymmetric for any bivector."""
    biv = _as_bivector(p)
    return mv_evaluate(mv_evaluate(biv, a), b).as_polynomial()


def jacobi_defect(p) -> Multivector:
    """[[P,P]]; zero exactly when P is Poisson."""
    biv = _as_bivector(p)
    if biv.degree != 2:
        raise ValueError("jacobi_defect expects a bivector")
    return schouten(biv, biv)


def jacobi_on_generators(p, triples=None) -> bool:
    """Cross-check: the Jacobi identity on coordinate triples.

    Sufficient for polynomial algebras because the bracket is a biderivation,
    but kept separate from the Schouten certificate on purpose.
    """
    biv = _as_bivector(p)
    ctx = biv.ctx
    if triples is None:
        triples = itertools.combinations_with_replacement(range(ctx.n), 3)
    for (i, j, k) in triples:
        a = Polynomial.variable(ctx, i)
        b = Polynomial.variable(ctx, j)
        c = Polynomial.variable(ctx, k)
        total = poisson_bracket(biv, a, poisson_bracket(biv, b, c)) \
            + poisson_bracket(biv, b, poisson_bracket(biv, c, a)) \
            + poisson_bracket(biv, c, poisson_bracket(biv, a, b))
        if not total.is_zero():
            return False
    return True


def hamiltonian(p, a: Polynomial) -> Multivector:
    """The Hamiltonian derivation X_a = P(a); X_a(b) = {a,b}_P."""
    return mv_evaluate(_as_bivector(p), a)


def is_canonical(p, x: Multivector) -> bool:
    """X is canonical iff it is a derivation of the bracket.

    Checked as the degree-1 cocycle condition [[X,P]] = 0; the generator-pair
    Leibniz identity X{a,b} = {Xa,b} + {a,Xb} is an equivalent finite check.
    """
    biv = _as_bivector(p)
    if x.degree != 1:
        raise ValueError("canonical derivations have degree 1")
    return schouten(x, biv).is_zero()


def canonical_on_generators(p, x: Multivector) -> bool:
    biv = _as_bivector(p)
    ctx = biv.ctx
    for i in range(ctx.n):
        for j in range(i + 1, ctx.n):
            a = Polynomial.variable(ctx, i)
            b = Polynomial.variable(ctx, j)
            lhs = mv_evaluate(x, poisson_bracket(biv, a, b)).as_polynomial()
            rhs = poisson_bracket(biv, mv_evaluate(x, a).as_polynomial(), b) \
                + poisson_bracket(biv, a, mv_evaluate(x, b).as_polynomial())
            if lhs != rhs:
                return False
    return True


def d_cochain(p: PoissonStructure, x: Multivector) -> Multivector:
    """The Poisson cochain differential [[P, .]]: D_k -> D_{k+1}."""
    return schouten(p.require(), x)


def d_chain(p: PoissonStructure, w: Form) -> Form:
    """The Poisson chain differential d_P = L_P: Lambda^j -> Lambda^{j-1}.

    Satisfies d_P^2 = 0 and d_P(a db) = {a,b}_P.  It is not a derivation of
    the wedge product; the defect is measured by the extended bracket.
    """
    return lie_form(p.require(), w)


# ---------------------------------------------------------------------------
# Extended Poisson bracket on forms
# ---------------------------------------------------------------------------


def _eb_scalar_left(p: Multivector, u: Polynomial, wp: Form) -> Form:
    """{u, w'} for a 0-form u, by peeling w' with the right Leibniz rule."""
    ctx = p.ctx
    out = Form.zero(ctx, wp.degree - 1)
    for tkey, v in wp.coeffs.items():
        out = out + _eb_scalar_term(p, u, v, tkey)
    return out


def _eb_scalar_term(p: Multivector, u: Polynomial, v: Polynomial,
                    tkey) -> Form:
    # {u, v^dx_T}: peel v (sign (-1)^0 = +1 on {u,v} = 0 branch, then
    # factor signs (-1)^{deg F} for passing exact factors)
    ctx = p.ctx
    if not tkey:
        return Form.zero(ctx, -1)  # {u, v} with both 0-forms

    def peel(fields) -> Form:
        # {u, dx_h ^ rest} = {u, dx_h}^rest + (-1)^1 dx_h^{u, rest}
        if not fields:
            return Form.zero(ctx, -1)
        h, rest = fields[0], fields[1:]
        one = Polynomial.const(ctx, 1)
        base = Form.from_polynomial(
            poisson_bracket(p, u, Polynomial.variable(ctx, h)).scale(-1))
        first = wedge_forms(base, Form(ctx, len(rest), {tuple(rest): one}))
        second = wedge_forms(Form(ctx, 1, {(h,): one}), peel(rest)).scale(-1)
        return first + second

    return peel(tkey).scale(v)


def _eb_exact_left(p: Multivector, s: int, wp: Form) -> Form:
    """{dx_s, w'}: peel w'; bases {dx_s, v} = {v, x_s}_P and
    {dx_s, dx_t} = -d{x_s, x_t}_P.

    The sign of the exact-exact base is forced: with {a, db} = -{a,b} and the
    graded Jacobi/antisymmetry laws, applying Jacobi to (da, b, dc) shows
    {da, db} = +d{a,b} would imply 2{b,{c,a}} = 0 for all a, b, c.
    """
    ctx = p.ctx
    xs = Polynomial.variable(ctx, s)
    out = Form.zero(ctx, wp.degree)
    one = Polynomial.const(ctx, 1)
    for tkey, v in wp.coeffs.items():
        # peel v first: {dx_s, v^dx_T} = {dx_s, v}^dx_T + v^{dx_s, dx_T}
        base = Form.from_polynomial(poisson_bracket(p, v, xs))
        out = out + wedge_forms(base, Form(ctx, len(tkey), {tkey: one}))

        def peel(fields) -> Form:
            if not fields:
                return Form.zero(ctx, 0)
            h, rest = fields[0], fields[1:]
            bracket = de_rham(Form.from_polynomial(
                poisson_bracket(p, xs, Polynomial.variable(ctx, h)))).scale(-1)
            first = wedge_forms(bracket, Form(ctx, len(rest), {tuple(rest): one}))
            second = wedge_forms(Form(ctx, 1, {(h,): one}), peel(rest))
            return first + second

        out = out + peel(tkey).scale(v)
    return out


def extended_bracket(p: PoissonStructure, w: Form, wp: Form) -> Form:
    """{w, w'}_P in Lambda^{j+j'-1}, from the constructive rules.

    The left argument is peeled with the antisymmetry-derived rule
    {F^R, g} = (-1)^{r(G-1)} {F,g}^R + F^{R,g}; single exact or scalar
    factors then peel the right argument.
    """
    check_same_context(w, wp)
    biv = p.require()
    ctx = biv.ctx
    result = Form.zero(ctx, w.degree + wp.degree - 1)
    gdeg = wp.degree
    one = Polynomial.const(ctx, 1)
    for skey, u in w.coeffs.items():

        def left_peel(factors) -> Form:
            # factors: list of ('p', poly) / ('d', var); returns {wedge, wp}
            head = factors[0]
            if len(factors) == 1:
                if head[0] == "p":
                    return _eb_scalar_left(biv, head[1], wp)
                return _eb_exact_left(biv, head[1], wp)
            rest = factors[1:]
            rdeg = sum(1 for f in rest if f[0] == "d")
            if head[0] == "p":
                fbracket = _eb_scalar_left(biv, head[1], wp)
                fwedge = Form.from_polynomial(head[1])
            else:
                fbracket = _eb_exact_left(biv, head[1], wp)
                fwedge = Form(ctx, 1, {(head[1],): one})
            rest_form = _factors_form(ctx, rest)
            first = wedge_forms(fbracket, rest_form).scale(sign_pow(rdeg * (gdeg - 1)))
            second = wedge_forms(fwedge, left_peel(rest))
            return first + second

        factors = [("p", u)] + [("d", s) for s in skey]
        result = result + left_peel(factors)
    return result


def _factors_form(ctx, factors) -> Form:
    out = Form.from_polynomial(Polynomial.const(ctx, 1))
    for f in factors:
        if f[0] == "p":
            out = out.scale(f[1])
        else:
            out = wedge_forms(out, Form(ctx, 1, {(f[1],): Polynomial.const(ctx, 1)}))
    return out


def lie_p_form(p: PoissonStructure, w: Form, x: Multivector) -> Multivector:
    """L^P_w = [i_w, boundary_P] on multivectors: D_k -> D_{k-j+1}.

    Same commutator realization as the other Lie derivatives (contraction
    first), built on the graded inner product; with it the extended bracket
    is represented: i_{{w,w'}} = [L^P_w, i_{w'}] and L^P over the bracket is
    the operator commutator.
    """
    from .tensorcalc import contract_multi_graded
    biv = p.require()
    first = contract_multi_graded(w, schouten(biv, x))
    second = schouten(biv, contract_multi_graded(w, x)).scale(sign_pow(w.degree))
    return first - second


# ---------------------------------------------------------------------------
# Compatible structures and the Magri scheme
# ---------------------------------------------------------------------------


@dataclass
class CompatibilityReport:
    compatible: bool
    defect: Multivector  # [[P, P']]


def compatible(p, q) -> CompatibilityReport:
    """P and P' commute when [[P,P']] = 0; then every pencil member
    mu P + mu' P' is again Poisson."""
    bp, bq = _as_bivector(p), _as_bivector(q)
    defect = schouten(bp, bq)
    return CompatibilityReport(compatible=defect.is_zero(), defect=defect)


@dataclass
class MagriChain:
    p: PoissonStructure
    q: PoissonStructure
    elements: list[Polynomial]
    degree_cap: int

    def links_ok(self) -> bool:
        for a, b in zip(self.elements, self.elements[1:]):
            if hamiltonian(self.p.bivector, a) != hamiltonian(self.q.bivector, b):
                return False
        return True


def magri_step(p: PoissonStructure, q: PoissonStructure, a: Polynomial,
               degree_cap: int) -> Polynomial | NoSolution:
    """Solve boundary_P(a) = boundary_Q(next) for `next` by linear ansatz
    over monomials of degree <= degree_cap.

    Solutions are unique only modulo Casimirs of Q; the returned solution has
    all free coordinates zero under the deterministic pivot order.
    """
    rep = compatible(p.bivector, q.bivector)
    if not rep.compatible:
        raise ValueError("structures are not compatible: [[P,P']] != 0")
    ctx = p.bivector.ctx
    target = hamiltonian(p.bivector, a)  # a vector field, n polynomial components
    monos = monomials_upto(ctx, degree_cap)
    columns = []
    for m in monos:
        columns.append(hamiltonian(q.bivector, Polynomial.monomial(ctx, m)))
    slots: dict = {}

    def slot(component: int, mono) -> int:
        key = (component, mono)
        if key not in slots:
            slots[key] = len(slots)
        return slots[key]

    entries = []
    for ci, col in enumerate(columns):
        for key, poly in col.coeffs.items():
            for mono, c in poly.terms.items():
                entries.append((slot(key[0], mono), ci, c))
    rhs_map: dict[int, Fraction] = {}
    for key, poly in target.coeffs.items():
        for mono, c in poly.terms.items():
            rhs_map[slot(key[0], mono)] = c
    nrows = len(slots)
    matrix = [[Fraction(0)] * len(columns) for _ in range(nrows)]
    for r, c, v in entries:
        matrix[r][c] = v
    rhs = [rhs_map.get(r, Fraction(0)) for r in range(nrows)]
    sol = solve_exact(LinearSystem(matrix, rhs))
    if isinstance(sol, NoSolution):
        return sol
    out = Polynomial.zero(ctx)
    for c, m in zip(sol.particular, monos):
        out = out + Polynomial.monomial(ctx, m, c)
    return out


def magri_chain(p: PoissonStructure, q: PoissonStructure, seed: Polynomial,
                steps: int, degree_cap: int) -> MagriChain | NoSolution:
    """Iterate magri_step from a seed; stops early if a step has no solution."""
    elements = [seed]
    for _ in range(steps):
        nxt = magri_step(p, q, elements[-1], degree_cap)
        if isinstance(nxt, NoSolution):
            return nxt
        elements.append(nxt)
    return MagriChain(p=p, q=q, elements=elements, degree_cap=degree_cap)


def involution_check(p, q, chain: MagriChain) -> bool:
    """All pairwise brackets vanish under both structures."""
    bp, bq = _as_bivector(p), _as_bivector(q)
    for a, b in itertools.combinations(chain.elements, 2):
        if not poisson_bracket(bp, a, b).is_zero():
            return False
        if not poisson_bracket(bq, a, b).is_zero():
            return False
    return True
