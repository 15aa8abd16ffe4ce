"""Differential operators on Q[x1..xn], their symbols, and the induced
graded Poisson structure on the symbol algebra.

Operators are kept in normal form (all coordinates to the left of all
partial derivatives), so composition reduces to the Weyl commutation rule
and symbol extraction is a projection onto the top derivative order.  The
symbol of an order-k operator lives in an extended context with one fiber
variable p_i per base variable x_i and is homogeneous of degree k in the
fiber variables.

The bracket on symbols is computed from representatives,
{s1,s2} = [D1 o D2 - D2 o D1] at grade k1+k2-1, and agrees with the
canonical-coordinate formula up to one global sign that is computed once
from {p, x} at import time and recorded as BRACKET_ORIENTATION.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .exactalg import Polynomial, VariableContext, check_same_context
from .tensorcalc import Form, Multivector, contract_form, de_rham, wedge_forms

ExpPair = tuple[tuple[int, ...], tuple[int, ...]]  # (x exponents, d exponents)


def _falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= (n - i)
    return out


class DiffOp:
    """Linear differential operator sum c * x^a * d^b in normal form."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: VariableContext, terms: dict[ExpPair, Fraction]):
        self.ctx = ctx
        self.terms = {eb: Fraction(c) for eb, c in terms.items() if c != 0}

    @staticmethod
    def zero(ctx: VariableContext) -> "DiffOp":
        return DiffOp(ctx, {})

    @staticmethod
    def multiplication(p: Polynomial) -> "DiffOp":
        zero_d = (0,) * p.ctx.n
        return DiffOp(p.ctx, {(e, zero_d): c for e, c in p.terms.items()})

    @staticmethod
    def partial(ctx: VariableContext, i: int) -> "DiffOp":
        d = [0] * ctx.n
        d[i] = 1
        return DiffOp(ctx, {((0,) * ctx.n, tuple(d)): Fraction(1)})

    def order(self) -> int:
        if not self.terms:
            return -1
        return max(sum(b) for (_, b) in self.terms)

    def apply(self, p: Polynomial) -> Polynomial:
        out = Polynomial.zero(self.ctx)
        for (a, b), c in self.terms.items():
            q = p
            for i, k in enumerate(b):
                for _ in range(k):
                    q = q.diff(i)
                    if q.is_zero():
                        break
            if q.is_zero():
                continue
            out = out + q * Polynomial.monomial(self.ctx, a, c)
        return out

    def __add__(self, other: "DiffOp") -> "DiffOp":
        check_same_context(self, other)
        out = dict(self.terms)
        for eb, c in other.terms.items():
            s = out.get(eb, Fraction(0)) + c
            if s == 0:
                out.pop(eb, None)
            else:
                out[eb] = s
        return DiffOp(self.ctx, out)

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + other.scale(-1)

    def scale(self, c) -> "DiffOp":
        c = Fraction(c)
        return DiffOp(self.ctx, {eb: c * v for eb, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, DiffOp) and self.ctx == other.ctx
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.ctx.names
        parts = []
        for (a, b) in sorted(self.terms, key=lambda eb: (sum(eb[1]), eb[1], sum(eb[0]), eb[0])):
            c = self.terms[(a, b)]
            factors = []
            for nm, k in zip(names, a):
                factors.append(nm if k == 1 else f"{nm}^{k}" if k else "")
            for nm, k in zip(names, b):
                factors.append(f"d/d{nm}" if k == 1 else f"(d/d{nm})^{k}" if k else "")
            body = "*".join(f for f in factors if f)
            parts.append(f"{c}*{body}" if body else str(c))
        return " + ".join(parts)

    __repr__ = __str__


def do_compose(d1: DiffOp, d2: DiffOp) -> DiffOp:
    """Operator composition (d1 o d2)(p) = d1(d2(p)), normal-ordered.

    Uses d^b x^g = sum_k prod_i C(b_i,k_i) (g_i)_(k_i) x^{g-k} d^{b-k}.
    """
    check_same_context(d1, d2)
    ctx = d1.ctx
    n = ctx.n
    out: dict[ExpPair, Fraction] = {}
    for (a1, b1), c1 in d1.terms.items():
        for (a2, b2), c2 in d2.terms.items():
            ranges = [range(min(b1[i], a2[i]) + 1) for i in range(n)]
            for ks in itertools.product(*ranges):
                coeff = c1 * c2
                for i in range(n):
                    coeff *= comb(b1[i], ks[i]) * _falling(a2[i], ks[i])
                if coeff == 0:
                    continue
                a = tuple(a1[i] + a2[i] - ks[i] for i in range(n))
                b = tuple(b1[i] + b2[i] - ks[i] for i in range(n))
                s = out.get((a, b), Fraction(0)) + coeff
                if s == 0:
                    out.pop((a, b), None)
                else:
                    out[(a, b)] = s
    return DiffOp(ctx, out)


def do_commutator_order_check(delta: DiffOp, k: int, probes) -> bool:
    """Nested-commutator criterion: [a_0,[...,[a_k, Delta]...]] = 0 for
    multiplication operators a_i, when Delta has order <= k."""
    ops = [DiffOp.multiplication(p) for p in probes]
    cur = delta
    for a in ops[:k + 1]:
        cur = do_compose(a, cur) - do_compose(cur, a)
    return not cur.terms


# ---------------------------------------------------------------------------
# Symbols
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolContext:
    """Base context extended by one fiber variable p_<name> per variable."""

    base: VariableContext
    total: VariableContext

    @staticmethod
    def build(base: VariableContext) -> "SymbolContext":
        fiber = tuple(f"p_{nm}" for nm in base.names)
        return SymbolContext(base=base, total=base.extend(fiber))

    @property
    def n(self) -> int:
        return self.base.n

    def fiber_index(self, i: int) -> int:
        return self.base.n + i


class Symbol:
    """Polynomial in (x, p), homogeneous of its grade in the fiber block."""

    __slots__ = ("sctx", "grade", "poly")

    def __init__(self, sctx: SymbolContext, grade: int, poly: Polynomial):
        n = sctx.n
        for e in poly.terms:
            if sum(e[n:]) != grade:
                raise ValueError(f"term {e} is not p-homogeneous of grade {grade}")
        self.sctx = sctx
        self.grade = grade
        self.poly = poly

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __eq__(self, other) -> bool:
        return (isinstance(other, Symbol) and self.sctx == other.sctx
                and self.grade == other.grade and self.poly == other.poly)

    def __hash__(self):
        return hash((self.sctx, self.grade, self.poly))

    def __str__(self) -> str:
        return str(self.poly)

    __repr__ = __str__


def symbol_of(delta: DiffOp, k: int, sctx: SymbolContext | None = None) -> Symbol:
    """The grade-k symbol: top-order derivative exponents become fiber
    variables; zero when order < k, an error when order > k."""
    if delta.order() > k:
        raise ValueError(f"operator has order {delta.order()} > {k}")
    if sctx is None:
        sctx = SymbolContext.build(delta.ctx)
    n = delta.ctx.n
    terms = {}
    for (a, b), c in delta.terms.items():
        if sum(b) != k:
            continue
        terms[a + b] = c
    return Symbol(sctx, k, Polynomial(sctx.total, terms))


def representative(s: Symbol) -> DiffOp:
    """The canonical representative x^a d^b of each symbol term."""
    n = s.sctx.n
    terms = {}
    for e, c in s.poly.terms.items():
        terms[(e[:n], e[n:])] = c
    return DiffOp(s.sctx.base, terms)


def symbol_mul(s1: Symbol, s2: Symbol) -> Symbol:
    """Product of symbols = symbol of the composed representatives; equals
    the plain polynomial product in (x, p)."""
    if s1.sctx != s2.sctx:
        raise ValueError("symbol context mismatch")
    composed = do_compose(representative(s1), representative(s2))
    return symbol_of(composed, s1.grade + s2.grade, s1.sctx)


def symbol_bracket(s1: Symbol, s2: Symbol) -> Symbol:
    """{s1, s2} = [D1 o D2 - D2 o D1] at grade k1 + k2 - 1.

    Independent of the chosen representatives (lower-order perturbations
    drop out of the top-grade coset).
    """
    if s1.sctx != s2.sctx:
        raise ValueError("symbol context mismatch")
    d1, d2 = representative(s1), representative(s2)
    c = do_compose(d1, d2) - do_compose(d2, d1)
    return symbol_of(c, s1.grade + s2.grade - 1, s1.sctx)


def canonical_formula_bracket(s1: Symbol, s2: Symbol) -> Symbol:
    """sum_i (ds1/dp_i ds2/dx_i - ds1/dx_i ds2/dp_i), the coordinate formula
    of the cotangent symplectic structure."""
    sctx = s1.sctx
    out = Polynomial.zero(sctx.total)
    for i in range(sctx.n):
        pi = sctx.fiber_index(i)
        out = out + s1.poly.diff(pi) * s2.poly.diff(i) \
            - s1.poly.diff(i) * s2.poly.diff(pi)
    return Symbol(sctx, s1.grade + s2.grade - 1, out)


def _compute_orientation() -> int:
    # the global sign relating symbol_bracket to the canonical formula,
    # fixed once from {p, x} in one variable
    ctx = VariableContext(("x",))
    sctx = SymbolContext.build(ctx)
    p = symbol_of(DiffOp.partial(ctx, 0), 1, sctx)
    xs = symbol_of(DiffOp.multiplication(Polynomial.variable(ctx, 0)), 0, sctx)
    via_reps = symbol_bracket(p, xs)
    via_formula = canonical_formula_bracket(p, xs)
    if via_reps == via_formula:
        return 1
    assert via_reps.poly == via_formula.poly.scale(-1)
    return -1


BRACKET_ORIENTATION = _compute_orientation()


# ---------------------------------------------------------------------------
# The canonical 1-form and section/form correspondences
# ---------------------------------------------------------------------------


def canonical_rho(sctx: SymbolContext) -> Form:
    """rho = sum_i p_i dx_i over the extended context; d(rho) is the
    canonical 2-form sum_i dp_i ^ dx_i."""
    total = sctx.total
    out = Form.zero(total, 1)
    for i in range(sctx.n):
        pi = Polynomial.variable(total, sctx.fiber_index(i))
        out = out + Form(total, 1, {(i,): pi})
    return out


def rho_pairing_check(sctx: SymbolContext) -> bool:
    """i_X(rho) recovers the grade-1 part of the restriction of coordinate
    derivations: i_{@x_i} rho = p_i and i_{@p_i} rho = 0."""
    total = sctx.total
    rho = canonical_rho(sctx)
    for i in range(sctx.n):
        base_field = Multivector.basis_field(total, i)
        want = Polynomial.variable(total, sctx.fiber_index(i))
        if contract_form(base_field, rho).as_polynomial() != want:
            return False
        fiber_field = Multivector.basis_field(total, sctx.fiber_index(i))
        if not contract_form(fiber_field, rho).as_polynomial().is_zero():
            return False
    return True


@dataclass
class SymbolHomomorphism:
    """An algebra map of symbols to base polynomials restricting to the
    identity on grade 0: determined by the images of the fiber generators."""

    sctx: SymbolContext
    images: dict[int, Polynomial]  # fiber index i -> image of p_i in A

    def __post_init__(self):
        for i, img in self.images.items():
            if img.ctx != self.sctx.base:
                raise ValueError("section images must be base polynomials")

    def apply(self, s: Symbol) -> Polynomial:
        n = self.sctx.n
        out = Polynomial.zero(self.sctx.base)
        for e, c in s.poly.terms.items():
            piece = Polynomial.monomial(self.sctx.base, e[:n], c)
            for i in range(n):
                for _ in range(e[n + i]):
                    piece = piece * self.images[i]
            out = out + piece
        return out


def section_from_form(w: Form) -> SymbolHomomorphism:
    """phi_w with phi_w(p_i) = i_{@x_i}(w), the coordinate contraction."""
    if w.degree != 1:
        raise ValueError("sections correspond to 1-forms")
    sctx = SymbolContext.build(w.ctx)
    images = {}
    for i in range(w.ctx.n):
        images[i] = contract_form(Multivector.basis_field(w.ctx, i), w).as_polynomial()
    return SymbolHomomorphism(sctx=sctx, images=images)


def form_from_section(phi: SymbolHomomorphism) -> Form:
    """w_phi = sum_i phi(p_i) dx_i; inverse of section_from_form."""
    base = phi.sctx.base
    out = Form.zero(base, 1)
    for i in range(base.n):
        out = out + Form(base, 1, {(i,): phi.images[i]})
    return out
