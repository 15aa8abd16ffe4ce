"""Vector-valued forms, the Froelicher-Nijenhuis and Nijenhuis-Richardson
brackets, the d_N bi-complex, and the bracket-extraction solver.

A VForm of bidegree (i, j) is an element of Lambda^j (x) D_i(A), identified
with D_i(Lambda^j) because Lambda^1 is free here.  The table maps pairs
(j-subset, i-subset) of variable indices to polynomial coefficients.

The FN bracket is *defined* on decomposables by

    [[w^X, w'^X']] = w^w'^[X,X'] + w^L_X(w')^X' - L_{X'}(w)^w'^X
                     + (-1)^j dw^i_X(w')^X' + (-1)^j i_{X'}(w)^dw'^X

and *verified* against the operator characterization L_[[O,O']] = [L_O, L_O']
by the test suite; the paper-level theory gives both descriptions.

The extraction solver works over a degree-truncated coefficient space: given
two graded operators it searches, by exact linear solve, for an element of a
named target space whose Lie action equals their graded commutator on every
truncated basis argument.  A NoRepresentative verdict therefore means "no
representative with coefficients of polynomial degree <= cap".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Union

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
    IndexTuple,
    contract_multi_graded,
    LieOperator,
    Multivector,
    contract_form,
    contract_multi,
    de_rham,
    lie_form,
    merge_indices,
    mv_evaluate,
    schouten,
    sign_pow,
    wedge_forms,
    wedge_multi,
)

VKey = tuple[IndexTuple, IndexTuple]  # (form subset, multivector subset)


class VForm:
    """Element of D_i(Lambda^j) in the free-module identification."""

    __slots__ = ("ctx", "fdeg", "mdeg", "coeffs")

    def __init__(self, ctx: VariableContext, fdeg: int, mdeg: int,
                 coeffs: dict[VKey, Polynomial]):
        self.ctx = ctx
        self.fdeg = fdeg
        self.mdeg = mdeg
        if fdeg < 0 or fdeg > ctx.n or mdeg < 0 or mdeg > ctx.n:
            coeffs = {}
        clean: dict[VKey, Polynomial] = {}
        for (fkey, mkey), poly in coeffs.items():
            if poly.is_zero():
                continue
            if len(fkey) != fdeg or list(fkey) != sorted(set(fkey)):
                raise ValueError(f"bad form subset {fkey} for degree {fdeg}")
            if len(mkey) != mdeg or list(mkey) != sorted(set(mkey)):
                raise ValueError(f"bad derivation subset {mkey} for degree {mdeg}")
            clean[(fkey, mkey)] = poly
        self.coeffs = clean

    @staticmethod
    def zero(ctx: VariableContext, fdeg: int, mdeg: int) -> "VForm":
        return VForm(ctx, fdeg, mdeg, {})

    @staticmethod
    def from_tensor(w: Form, x: Multivector) -> "VForm":
        """w (x) X as a vector-valued form."""
        check_same_context(w, x)
        coeffs: dict[VKey, Polynomial] = {}
        for fkey, fpoly in w.coeffs.items():
            for mkey, mpoly in x.coeffs.items():
                key = (fkey, mkey)
                term = fpoly * mpoly
                got = coeffs.get(key)
                got = term if got is None else got + term
                if got.is_zero():
                    coeffs.pop(key, None)
                else:
                    coeffs[key] = got
        return VForm(w.ctx, w.degree, x.degree, coeffs)

    @staticmethod
    def identity(ctx: VariableContext) -> "VForm":
        """N = sum_l dx_l (x) @x_l, the identity element of D_1(Lambda^1)."""
        one = Polynomial.const(ctx, 1)
        return VForm(ctx, 1, 1, {((l,), (l,)): one for l in range(ctx.n)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "VForm") -> "VForm":
        if self.is_zero() and (self.fdeg, self.mdeg) != (other.fdeg, other.mdeg):
            return other
        if other.is_zero() and (self.fdeg, self.mdeg) != (other.fdeg, other.mdeg):
            return self
        check_same_context(self, other)
        if (self.fdeg, self.mdeg) != (other.fdeg, other.mdeg):
            raise ValueError("bidegree mismatch")
        out = dict(self.coeffs)
        for key, poly in other.coeffs.items():
            s = out.get(key)
            s = poly if s is None else s + poly
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return VForm(self.ctx, self.fdeg, self.mdeg, out)

    def __sub__(self, other: "VForm") -> "VForm":
        return self + other.scale(-1)

    def scale(self, c) -> "VForm":
        if isinstance(c, (int, Fraction)):
            return VForm(self.ctx, self.fdeg, self.mdeg,
                         {k: p.scale(c) for k, p in self.coeffs.items()})
        return VForm(self.ctx, self.fdeg, self.mdeg,
                     {k: p * c for k, p in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, VForm)
            and self.ctx == other.ctx
            and (self.fdeg, self.mdeg) == (other.fdeg, other.mdeg)
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ctx, self.fdeg, self.mdeg, frozenset(self.coeffs.items())))

    def terms(self) -> Iterable[tuple[Form, Multivector, Polynomial]]:
        """Decomposable pieces (basis form, basis multivector, coefficient)."""
        one = Polynomial.const(self.ctx, 1)
        for (fkey, mkey), poly in sorted(self.coeffs.items()):
            yield (Form(self.ctx, self.fdeg, {fkey: one}),
                   Multivector(self.ctx, self.mdeg, {mkey: one}),
                   poly)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        names = self.ctx.names
        parts = []
        for (fkey, mkey) in sorted(self.coeffs):
            poly = self.coeffs[(fkey, mkey)]
            fpart = "^".join(f"d{names[i]}" for i in fkey) or "1"
            mpart = "^".join(f"@{names[i]}" for i in mkey) or "1"
            basis = f"{fpart}#{mpart}"
            body = str(poly)
            if body == "1":
                parts.append(basis)
            elif body == "-1":
                parts.append(f"-{basis}")
            elif len(poly.terms) == 1:
                parts.append(f"{body}*{basis}")
            else:
                parts.append(f"({body})*{basis}")
        out = parts[0]
        for chunk in parts[1:]:
            out += f" - {chunk[1:]}" if chunk.startswith("-") else f" + {chunk}"
        return out

    __repr__ = __str__


def wedge_form_vform(w: Form, om: VForm) -> VForm:
    """w ^ Omega: wedge into the form leg from the left."""
    check_same_context(w, om)
    out: dict[VKey, Polynomial] = {}
    for fkey, fpoly in w.coeffs.items():
        for (gkey, mkey), gpoly in om.coeffs.items():
            m = merge_indices(fkey, gkey)
            if m is None:
                continue
            sign, merged = m
            term = (fpoly * gpoly).scale(sign)
            key = (merged, mkey)
            s = out.get(key)
            s = term if s is None else s + term
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    return VForm(om.ctx, w.degree + om.fdeg, om.mdeg, out)


# ---------------------------------------------------------------------------
# Contractions
# ---------------------------------------------------------------------------


def vv_contract(om: VForm, w: Form) -> Form:
    """i_Omega(w) for Omega in D_i(Lambda^j): insert the derivation legs into
    w, then wedge the form leg in front; lands in Lambda^{k+j-i}."""
    check_same_context(om, w)
    result = Form.zero(om.ctx, w.degree + om.fdeg - om.mdeg)
    one = Polynomial.const(om.ctx, 1)
    for (fkey, mkey), poly in om.coeffs.items():
        inner = contract_form(Multivector(om.ctx, om.mdeg, {mkey: poly}), w)
        if inner.is_zero():
            continue
        result = result + wedge_forms(Form(om.ctx, om.fdeg, {fkey: one}), inner)
    return result


def contract_vform_by_multivector(x: Multivector, om: VForm) -> VForm:
    """i_X(Omega): contract the form leg of Omega by the multivector X."""
    check_same_context(x, om)
    result = VForm.zero(om.ctx, om.fdeg - x.degree, om.mdeg)
    for w, m, poly in om.terms():
        inner = contract_form(x, w)
        if inner.is_zero():
            continue
        result = result + VForm.from_tensor(inner, m).scale(poly)
    return result


def contract_vform_by_vform(om: VForm, target: VForm) -> VForm:
    """i_Omega(Omega'): the algebraic action of Omega on the form leg of
    Omega'; no derivatives of coefficients appear."""
    check_same_context(om, target)
    result = VForm.zero(om.ctx, target.fdeg + om.fdeg - om.mdeg, target.mdeg)
    for w, m, poly in target.terms():
        inner = vv_contract(om, w)
        if inner.is_zero():
            continue
        result = result + VForm.from_tensor(inner, m).scale(poly)
    return result


def contract_multivector_by_vform(om: VForm, x: Multivector) -> Multivector:
    """i_Omega(X) for Omega in D_i(Lambda^j) acting on D_k(A): insert the form
    leg into X through the graded inner product, wedge the derivation leg in
    front; lands in D_{k-j+i}(A)."""
    check_same_context(om, x)
    result = Multivector.zero(om.ctx, x.degree - om.fdeg + om.mdeg)
    one = Polynomial.const(om.ctx, 1)
    for (fkey, mkey), poly in om.coeffs.items():
        inner = contract_multi_graded(Form(om.ctx, om.fdeg, {fkey: poly}), x)
        if inner.is_zero():
            continue
        result = result + wedge_multi(Multivector(om.ctx, om.mdeg, {mkey: one}), inner)
    return result


# ---------------------------------------------------------------------------
# Lie derivatives
# ---------------------------------------------------------------------------


def lie_general(om: VForm, w: Form) -> Form:
    """L_Omega = [i_Omega, d]: Lambda^k -> Lambda^{k+j-i+1}.

    Same commutator realization as lie_form (contraction first); reduces to
    lie_form when j = 0 and to the D_1(Lambda^k) Lie derivative when i = 1.
    """
    shift = om.fdeg - om.mdeg  # operator degree of i_Omega
    return vv_contract(om, de_rham(w)) - de_rham(vv_contract(om, w)).scale(sign_pow(shift))


def vv_lie(om: VForm, w: Form) -> Form:
    """L_Omega for Omega in D_1(Lambda^k): degree shift +k."""
    if om.mdeg != 1:
        raise ValueError("vv_lie expects a form-valued derivation (multi-degree 1)")
    return lie_general(om, w)


def lie_p_general(p: Multivector, om: VForm, x: Multivector) -> Multivector:
    """L^P_Omega = [boundary_P, i_Omega] on multivectors; P must be Poisson.

    For Omega in D_i(Lambda^j) this maps D_k(A) -> D_{k-j+i+1}(A).
    """
    if p.degree != 2:
        raise ValueError("P must be a bivector")
    if not schouten(p, p).is_zero():
        raise ValueError("P is not Poisson: [[P,P]] != 0")
    shift = om.mdeg - om.fdeg  # operator degree of i_Omega on multivectors
    first = contract_multivector_by_vform(om, schouten(p, x))
    second = schouten(p, contract_multivector_by_vform(om, x)).scale(sign_pow(shift))
    return first - second


# ---------------------------------------------------------------------------
# The Froelicher-Nijenhuis bracket
# ---------------------------------------------------------------------------


def fn_bracket(om: VForm, om2: VForm) -> VForm:
    """[[Omega, Omega']] in D_1(Lambda^{j+j'}), by the decomposable formula.

    Coefficients ride with the form legs, so the derivation legs are always
    coordinate fields and their commutator vanishes termwise.
    """
    check_same_context(om, om2)
    if om.mdeg != 1 or om2.mdeg != 1:
        raise ValueError("fn_bracket expects multi-degree 1 on both sides")
    ctx = om.ctx
    j = om.fdeg
    result = VForm.zero(ctx, om.fdeg + om2.fdeg, 1)
    sj = sign_pow(j)
    for (fkey, mkey), upoly in om.coeffs.items():
        w = Form(ctx, om.fdeg, {fkey: upoly})
        xvar = mkey[0]
        xfield = Multivector.basis_field(ctx, xvar)
        dw = de_rham(w)
        for (gkey, nkey), vpoly in om2.coeffs.items():
            w2 = Form(ctx, om2.fdeg, {gkey: vpoly})
            yvar = nkey[0]
            yfield = Multivector.basis_field(ctx, yvar)
            # w ^ L_X(w') (x) X'
            t2 = wedge_forms(w, lie_form(xfield, w2))
            if not t2.is_zero():
                result = result + VForm.from_tensor(t2, yfield)
            # - L_X'(w) ^ w' (x) X
            t3 = wedge_forms(lie_form(yfield, w), w2)
            if not t3.is_zero():
                result = result - VForm.from_tensor(t3, xfield)
            # (-1)^j dw ^ i_X(w') (x) X'
            t4 = wedge_forms(dw, contract_form(xfield, w2)).scale(sj)
            if not t4.is_zero():
                result = result + VForm.from_tensor(t4, yfield)
            # (-1)^j i_X'(w) ^ dw' (x) X
            t5 = wedge_forms(contract_form(yfield, w), de_rham(w2)).scale(sj)
            if not t5.is_zero():
                result = result + VForm.from_tensor(t5, xfield)
    return result


def nr_bracket(om: VForm, om2: VForm) -> VForm:
    """Nijenhuis-Richardson bracket: i_Omega(Omega') minus the graded flip."""
    check_same_context(om, om2)
    if om.mdeg != 1 or om2.mdeg != 1:
        raise ValueError("nr_bracket expects multi-degree 1 on both sides")
    j, jp = om.fdeg, om2.fdeg
    first = contract_vform_by_vform(om, om2)
    second = contract_vform_by_vform(om2, om).scale(sign_pow((j - 1) * (jp - 1)))
    return first - second


@dataclass
class IntegrabilityReport:
    integrable: bool
    defect: VForm  # [[N, N]]; zero iff integrable


def is_integrable(n: VForm) -> IntegrabilityReport:
    """N in D_1(Lambda^1) is integrable iff its FN self-bracket vanishes."""
    if n.fdeg != 1 or n.mdeg != 1:
        raise ValueError("integrability is defined for bidegree (1,1)")
    defect = fn_bracket(n, n)
    return IntegrabilityReport(integrable=defect.is_zero(), defect=defect)


def d_n(n: VForm, w: Form) -> Form:
    """d_N = L_N on forms, for integrable N; with d it forms a bi-complex."""
    report = is_integrable(n)
    if not report.integrable:
        raise ValueError(f"N is not integrable: [[N,N]] = {report.defect}")
    return vv_lie(n, w)


# ---------------------------------------------------------------------------
# Bracket extraction (the general scheme, and when it fails)
# ---------------------------------------------------------------------------


def monomials_upto(ctx: VariableContext, cap: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree <= cap, graded-lex order."""
    out = []
    for total in range(cap + 1):
        for combo in itertools.product(range(total + 1), repeat=ctx.n):
            if sum(combo) == total:
                out.append(combo)
    return out


@dataclass(frozen=True)
class TargetSpace:
    """Which graded space the extracted element should live in.

    kind: ("multivector", degree) or ("vform", mdeg, fdeg)
    action: "deRham" for operators on forms, or ("poisson", P) for the
    boundary-twisted action on multivectors.
    """

    kind: tuple
    action: object = "deRham"


@dataclass
class BracketProblem:
    lhs: LieOperator
    rhs: LieOperator
    target: TargetSpace
    degree_cap: int
    ctx: VariableContext


@dataclass
class ExtractedElement:
    element: object  # Multivector or VForm
    kernel_dimension: int
    rank: int


@dataclass
class NoRepresentative:
    """No element with coefficients of degree <= cap represents the commutator.

    ``witness`` is the first basis argument whose equations turned the
    truncated linear system inconsistent.
    """

    witness: object
    degree_cap: int


def _candidate_elements(ctx: VariableContext, target: TargetSpace,
                        cap: int) -> list:
    monos = monomials_upto(ctx, cap)
    out = []
    if target.kind[0] == "multivector":
        deg = target.kind[1]
        for key in itertools.combinations(range(ctx.n), deg):
            for m in monos:
                out.append(Multivector(ctx, deg, {key: Polynomial.monomial(ctx, m)}))
    else:
        _, mdeg, fdeg = target.kind
        for fkey in itertools.combinations(range(ctx.n), fdeg):
            for mkey in itertools.combinations(range(ctx.n), mdeg):
                for m in monos:
                    out.append(VForm(ctx, fdeg, mdeg,
                                     {(fkey, mkey): Polynomial.monomial(ctx, m)}))
    return out


def _candidate_action(target: TargetSpace, candidate) -> Callable:
    if target.action == "deRham":
        if isinstance(candidate, Multivector):
            return lambda w: lie_form(candidate, w)
        return lambda w: lie_general(candidate, w)
    tag, p = target.action
    assert tag == "poisson"
    return lambda x: lie_p_general(p, candidate, x)


def _argument_space(ctx: VariableContext, target: TargetSpace, cap: int) -> list:
    monos = monomials_upto(ctx, cap)
    args = []
    if target.action == "deRham":
        for j in range(ctx.n + 1):
            for key in itertools.combinations(range(ctx.n), j):
                for m in monos:
                    args.append(Form(ctx, j, {key: Polynomial.monomial(ctx, m)}))
    else:
        for k in range(ctx.n + 1):
            for key in itertools.combinations(range(ctx.n), k):
                for m in monos:
                    args.append(Multivector(ctx, k, {key: Polynomial.monomial(ctx, m)}))
    return args


def _coordinates(element, index: dict) -> dict[int, Fraction]:
    """Coordinates of a table element in the flat output basis."""
    out: dict[int, Fraction] = {}
    for key, poly in element.coeffs.items():
        for mono, c in poly.terms.items():
            slot = index.get((key, mono))
            if slot is None:
                raise ValueError(f"output coordinate {(key, mono)} exceeds truncation")
            out[slot] = out.get(slot, Fraction(0)) + c
    return out


def _graded_commutator(lhs: LieOperator, rhs: LieOperator, arg):
    s = sign_pow(lhs.shift * rhs.shift)
    first = lhs(rhs(arg))
    second = lhs(arg)
    second = rhs(second)
    if s == 1:
        return first - second
    return first + second


def extract_bracket(prob: BracketProblem) -> ExtractedElement | NoRepresentative:
    """Search for B in the target space with L_B = [L_lhs, L_rhs] on every
    truncated basis argument; exact linear solve over Q.

    The candidate's coefficients and the test arguments are both capped at
    polynomial degree ``degree_cap``; a NoRepresentative verdict is relative
    to that cap.
    """
    ctx = prob.ctx
    cap = prob.degree_cap
    if prob.lhs.shift + prob.rhs.shift != _target_shift(prob.target):
        raise ValueError("operator grading inconsistent with target space")
    candidates = _candidate_elements(ctx, prob.target, cap)
    args = _argument_space(ctx, prob.target, cap)

    rows: list[list[Fraction]] = []
    rhs_vals: list[Fraction] = []
    row_sources: list[int] = []  # arg index per matrix row
    out_index: dict = {}

    # output slots are discovered lazily; rows are padded at the end
    cells: list[dict[int, Fraction]] = []

    def slot_of(key, mono) -> int:
        k = (key, mono)
        if k not in out_index:
            out_index[k] = len(out_index)
        return out_index[k]

    for ai, arg in enumerate(args):
        target_val = _graded_commutator(prob.lhs, prob.rhs, arg)
        col_entries: list[dict[int, Fraction]] = []
        for cand in candidates:
            act = _candidate_action(prob.target, cand)(arg)
            entry: dict[int, Fraction] = {}
            for key, poly in act.coeffs.items():
                for mono, c in poly.terms.items():
                    entry[slot_of(key, mono)] = c
            col_entries.append(entry)
        tgt: dict[int, Fraction] = {}
        for key, poly in target_val.coeffs.items():
            for mono, c in poly.terms.items():
                tgt[slot_of(key, mono)] = c
        touched = set(tgt)
        for entry in col_entries:
            touched |= set(entry)
        for slot in sorted(touched):
            cells.append({ci: e[slot] for ci, e in enumerate(col_entries) if slot in e})
            rhs_vals.append(tgt.get(slot, Fraction(0)))
            row_sources.append(ai)

    ncols = len(candidates)
    matrix = [[row.get(c, Fraction(0)) for c in range(ncols)] for row in cells]
    solution = solve_exact(LinearSystem(matrix, rhs_vals))
    if isinstance(solution, NoSolution):
        witness = _find_witness(matrix, rhs_vals, row_sources, args)
        return NoRepresentative(witness=witness, degree_cap=cap)
    element = None
    for c, cand in zip(solution.particular, candidates):
        if c == 0:
            continue
        piece = cand.scale(c)
        element = piece if element is None else element + piece
    if element is None:
        element = _zero_of(ctx, prob.target)
    return ExtractedElement(element=element,
                            kernel_dimension=len(solution.null_basis),
                            rank=solution.rank)


def _target_shift(target: TargetSpace) -> int:
    if target.kind[0] == "multivector":
        return 1 - target.kind[1]
    _, mdeg, fdeg = target.kind
    if target.action == "deRham":
        return fdeg - mdeg + 1
    return mdeg - fdeg + 1


def _zero_of(ctx, target: TargetSpace):
    if target.kind[0] == "multivector":
        return Multivector.zero(ctx, target.kind[1])
    _, mdeg, fdeg = target.kind
    return VForm.zero(ctx, fdeg, mdeg)


def _find_witness(matrix, rhs_vals, row_sources, args):
    """First argument whose accumulated equations are already inconsistent."""
    upto = 0
    for ai in range(len(args)):
        while upto < len(row_sources) and row_sources[upto] <= ai:
            upto += 1
        sol = solve_exact(LinearSystem(matrix[:upto], rhs_vals[:upto]))
        if isinstance(sol, NoSolution):
            return args[ai]
    return args[-1] if args else None


# LieOperator constructors for this module's actions


def lie_by_vform(om: VForm) -> LieOperator:
    return LieOperator(f"lieByVForm({om})", om.fdeg - om.mdeg + 1,
                       lambda w: lie_general(om, w), "form")


def poisson_boundary(p: Multivector) -> LieOperator:
    return LieOperator(f"poissonBoundary({p})", 1,
                       lambda x: schouten(p, x), "multivector")


def lie_p_by_vform(p: Multivector, om: VForm) -> LieOperator:
    return LieOperator(f"lieP({om})", om.mdeg - om.fdeg + 1,
                       lambda x: lie_p_general(p, om, x), "multivector")
