"""Degree-truncated complexes and exact Betti numbers.

The differentials here (Poisson cochain/chain, the integrable-structure
differential on forms, the vertical connection complex) act on infinite-
dimensional spaces; finite computation truncates polynomial coefficients.
A structure whose coefficients have maximal degree g shifts coefficient
degree by at most g - 1 per application, so position t of a window gets the
cap  cap + t*(g - 1); with that choice every matrix lands exactly inside the
next basis and consecutive matrices compose to the exact zero matrix.

One guard position is materialized past the right edge of the requested
window so every requested position has both an incoming and an outgoing
differential (the incoming one at the left edge is the zero map).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .exactalg import LinearSystem, Polynomial, Solution, VariableContext, matrix_rank, solve_exact
from .tensorcalc import Form, Multivector
from .vvforms import VForm, monomials_upto


@dataclass
class GradedBasis:
    """Ordered monomial-labelled basis of one truncated graded space."""

    space: str                      # e.g. "D_2(A) deg<=3" (human-readable)
    kind: tuple                     # ("multivector", k) | ("form", j) | ("vvertical", j, fibers)
    poly_degree: int
    labels: list = field(default_factory=list)   # (table key, exponent tuple)
    ctx: VariableContext = None

    def elements(self):
        one = Fraction(1)
        for key, mono in self.labels:
            yield self._make(key, mono, one)

    def _make(self, key, mono, coeff):
        poly = Polynomial.monomial(self.ctx, mono, coeff)
        if self.kind[0] == "multivector":
            return Multivector(self.ctx, self.kind[1], {key: poly})
        if self.kind[0] == "form":
            return Form(self.ctx, self.kind[1], {key: poly})
        return VForm(self.ctx, self.kind[1], 1, {key: poly})

    def coords(self, element) -> list[Fraction]:
        index = {lab: i for i, lab in enumerate(self.labels)}
        out = [Fraction(0)] * len(self.labels)
        for key, poly in element.coeffs.items():
            for mono, c in poly.terms.items():
                slot = index.get((key, mono))
                if slot is None:
                    raise ValueError(
                        f"element leaves the truncated space {self.space}: "
                        f"coordinate {(key, mono)}")
                out[slot] = c
        return out

    def from_coords(self, vec):
        element = None
        for c, (key, mono) in zip(vec, self.labels):
            if c == 0:
                continue
            piece = self._make(key, mono, c)
            element = piece if element is None else element + piece
        if element is None:
            if self.kind[0] == "multivector":
                return Multivector.zero(self.ctx, self.kind[1])
            if self.kind[0] == "form":
                return Form.zero(self.ctx, self.kind[1])
            return VForm.zero(self.ctx, self.kind[1], 1)
        return element

    @property
    def dim(self) -> int:
        return len(self.labels)


def _basis_for(ctx: VariableContext, kind: tuple, cap: int) -> GradedBasis:
    labels = []
    degree_ok = 0 <= kind[1] <= ctx.n
    if cap >= 0 and degree_ok:
        monos = monomials_upto(ctx, cap)
        if kind[0] == "multivector":
            for key in itertools.combinations(range(ctx.n), kind[1]):
                for m in monos:
                    labels.append((key, m))
        elif kind[0] == "form":
            for key in itertools.combinations(range(ctx.n), kind[1]):
                for m in monos:
                    labels.append((key, m))
        else:
            _, j, fibers = kind
            for fkey in itertools.combinations(range(ctx.n), j):
                for mkey in fibers:
                    for m in monos:
                        labels.append(((fkey, (mkey,)), m))
    name = {"multivector": f"D_{kind[1]}(A)", "form": f"Lambda^{kind[1]}",
            "vvertical": f"D_1^v(Lambda^{kind[1]})"}[kind[0]]
    return GradedBasis(space=f"{name} deg<={cap}", kind=kind, poly_degree=cap,
                       labels=labels, ctx=ctx)


@dataclass
class TruncatedComplex:
    """A finite window of graded spaces with exact differential matrices.

    ``spaces`` has one guard entry past the window; ``matrices[t]`` is the
    differential spaces[t] -> spaces[t+1] stored row-major (rows indexed by
    the target basis).
    """

    description: str
    grades: list[int]
    spaces: list[GradedBasis]
    matrices: list[list[list[Fraction]]]
    window: tuple[int, int]
    caps: list[int]

    def matrix(self, t: int) -> list[list[Fraction]]:
        return self.matrices[t]

    def check_compositions(self) -> bool:
        """Consecutive differentials compose to the exact zero matrix."""
        for a, b in zip(self.matrices, self.matrices[1:]):
            if not a or not b:
                continue
            cols_a = len(a[0]) if a else 0
            for col in range(cols_a):
                v = [row[col] for row in a]
                w = _mat_vec(b, v)
                if any(c != 0 for c in w):
                    return False
        return True

    def positions(self) -> range:
        return range(len(self.grades) - 1)  # exclude the guard


def _mat_vec(m, v):
    return [sum((r[i] * v[i] for i in range(len(v))), Fraction(0)) for r in m]


def _build_matrix(src: GradedBasis, dst: GradedBasis, diff: Callable):
    cols = []
    for e in src.elements():
        cols.append(dst.coords(diff(e)))
    # transpose to row-major (target-indexed rows)
    rows = [[cols[c][r] for c in range(len(cols))] for r in range(dst.dim)]
    return rows


def _structure_degree(coeffs_iter) -> int:
    g = 0
    for poly in coeffs_iter:
        g = max(g, poly.total_degree())
    return g


def build_complex(kind: str, structure, poly_degree_cap: int,
                  window: tuple[int, int], fibers: tuple[int, ...] = ()) -> TruncatedComplex:
    """Assemble the truncated complex for one of the supported differentials.

    kind: "poissonCochain" | "poissonChain" | "nijenhuis" | "verticalConnection"
    structure: a verified PoissonStructure for the Poisson kinds, an
    integrable VForm for "nijenhuis", a flat Connection for the vertical kind.
    """
    from .poisson import PoissonStructure, d_chain, d_cochain
    from .vvforms import d_n, fn_bracket, is_integrable

    lo, hi = window
    if lo > hi:
        raise ValueError("empty window")

    if kind == "poissonCochain":
        if not isinstance(structure, PoissonStructure):
            structure = PoissonStructure.verify(structure)
        p = structure.require()
        ctx = p.ctx
        g = _structure_degree(p.coeffs.values())
        grades = list(range(lo, hi + 2))
        kinds = [("multivector", k) for k in grades]
        diff = lambda e: d_cochain(structure, e)
        desc = f"Poisson cochain complex of {p}"
    elif kind == "poissonChain":
        if not isinstance(structure, PoissonStructure):
            structure = PoissonStructure.verify(structure)
        p = structure.require()
        ctx = p.ctx
        g = _structure_degree(p.coeffs.values())
        grades = list(range(hi, lo - 2, -1))  # descending, guard below lo
        kinds = [("form", j) for j in grades]
        diff = lambda e: d_chain(structure, e)
        desc = f"Poisson chain complex of {p}"
    elif kind == "nijenhuis":
        rep = is_integrable(structure)
        if not rep.integrable:
            raise ValueError("structure is not integrable: [[N,N]] != 0")
        ctx = structure.ctx
        g = _structure_degree(structure.coeffs.values())
        grades = list(range(lo, hi + 2))
        kinds = [("form", j) for j in grades]
        diff = lambda e: d_n(structure, e)
        desc = f"d_N complex of {structure}"
    elif kind == "verticalConnection":
        # structure: Connection (imported lazily to avoid a cycle)
        from .connections import Connection
        conn: Connection = structure
        u = conn.connection_form()
        if not conn.is_flat():
            raise ValueError("connection is not flat")
        ctx = conn.total_ctx
        fibers = tuple(conn.fiber_indices())
        g = _structure_degree(u.coeffs.values())
        grades = list(range(lo, hi + 2))
        kinds = [("vvertical", j, fibers) for j in grades]
        diff = lambda e: fn_bracket(u, e)
        desc = f"vertical complex of {u}"
    else:
        raise ValueError(f"unknown complex kind {kind!r}")

    offset = g - 1
    caps = [poly_degree_cap + t * offset for t in range(len(grades))]
    spaces = [_basis_for(ctx, k, c) for k, c in zip(kinds, caps)]
    matrices = [_build_matrix(spaces[t], spaces[t + 1], diff)
                for t in range(len(spaces) - 1)]
    return TruncatedComplex(description=desc, grades=grades, spaces=spaces,
                            matrices=matrices, window=window, caps=caps)


def betti(complex_: TruncatedComplex, position: int) -> int:
    """dim ker(outgoing) - rank(incoming) at a window position (0-based)."""
    if position < 0 or position >= len(complex_.grades) - 1:
        raise IndexError(
            f"position {position} outside the window (boundary convention "
            f"covers only the materialized guard)")
    out_mat = complex_.matrices[position]
    dim = complex_.spaces[position].dim
    rank_out = matrix_rank(out_mat)
    kernel_dim = dim - rank_out
    rank_in = matrix_rank(complex_.matrices[position - 1]) if position > 0 else 0
    return kernel_dim - rank_in


def betti_table(complex_: TruncatedComplex) -> list[int]:
    return [betti(complex_, t) for t in complex_.positions()]


@dataclass
class CohomologyClass:
    label: str
    representative: object
    coordinates: list[Fraction]


@dataclass
class HReport:
    position: int
    grade: int
    dimension: int
    classes: list[CohomologyClass]
    notes: list[str] = field(default_factory=list)


_POISSON_LABELS = {
    0: "casimir",
    1: "canonical-mod-hamiltonian",
    2: "infinitesimal-deformation",
    3: "obstruction-space",
}


def interpret_H(complex_: TruncatedComplex, position: int) -> HReport:
    """Representative cocycles of the cohomology at a position, with labels.

    For vertical connection complexes the report additionally verifies that
    the inner product and the FN bracket of representatives are again
    cocycles, recording the induced classes.
    """
    from .vvforms import contract_vform_by_vform, fn_bracket

    grade = complex_.grades[position]
    space = complex_.spaces[position]
    out_mat = complex_.matrices[position]
    kernel = _kernel_basis(out_mat, space.dim)
    image_cols = _image_columns(complex_.matrices[position - 1]) if position > 0 else []
    reps = _quotient_representatives(kernel, image_cols)
    if complex_.description.startswith("Poisson cochain"):
        label = _POISSON_LABELS.get(grade, f"H^{grade}")
    elif complex_.description.startswith("vertical"):
        label = {0: "symmetry", 1: "recursion-operator"}.get(grade, f"H^{grade}")
    else:
        label = f"H^{grade}"
    classes = [CohomologyClass(label=label, representative=space.from_coords(v),
                               coordinates=v) for v in reps]
    report = HReport(position=position, grade=grade, dimension=len(reps),
                     classes=classes)
    if complex_.description.startswith("vertical") and classes:
        for c1 in classes:
            for c2 in classes:
                prod = contract_vform_by_vform(c1.representative, c2.representative)
                br = fn_bracket(c1.representative, c2.representative)
                for name, val in (("i", prod), ("fn", br)):
                    gr = val.fdeg
                    t = gr - complex_.grades[0]
                    if 0 <= t < len(complex_.matrices):
                        img = _apply(complex_, t, val)
                        status = "cocycle" if img.is_zero() else "NOT-cocycle"
                    else:
                        status = "outside-window"
                    report.notes.append(
                        f"{name}(H^{c1.representative.fdeg}, H^{c2.representative.fdeg})"
                        f" -> grade {gr}: {status}")
        report.notes.append(f"checked {len(classes)}^2 representative products")
    return report


def _apply(complex_: TruncatedComplex, t: int, element):
    src = complex_.spaces[t]
    dst = complex_.spaces[t + 1]
    vec = src.coords(element)
    out = _mat_vec(complex_.matrices[t], vec)
    return dst.from_coords(out)


def _kernel_basis(matrix, ncols) -> list[list[Fraction]]:
    if ncols == 0:
        return []
    if not matrix:
        out = []
        for i in range(ncols):
            v = [Fraction(0)] * ncols
            v[i] = Fraction(1)
            out.append(v)
        return out
    sol = solve_exact(LinearSystem(matrix, [Fraction(0)] * len(matrix)))
    assert isinstance(sol, Solution)
    return sol.null_basis


def _image_columns(matrix) -> list[list[Fraction]]:
    if not matrix or not matrix[0]:
        return []
    ncols = len(matrix[0])
    return [[row[c] for row in matrix] for c in range(ncols)]


def _quotient_representatives(kernel, image_cols) -> list[list[Fraction]]:
    """Greedy: kernel vectors that extend the rank of the image span."""
    if not kernel:
        return []
    base = [v[:] for v in image_cols]
    rank = matrix_rank(_cols_to_matrix(base)) if base else 0
    reps = []
    current = base
    for v in kernel:
        trial = current + [v]
        r = matrix_rank(_cols_to_matrix(trial))
        if r > rank:
            reps.append(v)
            current = trial
            rank = r
    return reps


def _cols_to_matrix(cols):
    if not cols:
        return []
    n = len(cols[0])
    return [[col[i] for col in cols] for i in range(n)]
