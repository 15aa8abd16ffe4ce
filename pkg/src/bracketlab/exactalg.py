"""Exact base algebra: Q[x1..xn] with sparse polynomials and exact linear solving.

The coefficient field is Q, realized by ``fractions.Fraction`` (always stored
in lowest terms with a positive denominator, so the usual normal-form
invariants hold for free).  A polynomial is a sparse map

    exponent tuple (one nonnegative int per variable)  ->  Fraction

with no zero coefficients stored; two polynomials are equal iff their term
maps are equal.  All values in this module are immutable after construction
and every operation is a pure function, so everything is safe to share
between threads.

Linear systems are solved by fraction-free-in-spirit Gaussian elimination
over Fraction with a deterministic pivot rule (first nonzero entry in column
order), returning one particular solution plus a basis of the null space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class VariableContext:
    """Ordered list of variable names; the order is fixed for a workspace.

    Index ``i`` corresponds to the basis derivation ``@name_i`` and the basis
    1-form ``d name_i``.
    """

    names: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names: {self.names}")

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def extend(self, extra: Iterable[str]) -> "VariableContext":
        return VariableContext(self.names + tuple(extra))


class ContextMismatch(ValueError):
    """Raised when two elements from different variable contexts are combined."""


def check_same_context(a, b) -> None:
    if a.ctx != b.ctx:
        raise ContextMismatch(f"context mismatch: {a.ctx.names} vs {b.ctx.names}")


def _as_fraction(c: Scalar) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class Polynomial:
    """Sparse multivariate polynomial over Q.

    ``terms`` maps exponent tuples to nonzero Fractions.  Instances are
    immutable by convention; all arithmetic returns new objects.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: VariableContext, terms: dict[tuple[int, ...], Fraction]):
        self.ctx = ctx
        self.terms = {e: c for e, c in terms.items() if c != 0}

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(ctx: VariableContext) -> "Polynomial":
        return Polynomial(ctx, {})

    @staticmethod
    def const(ctx: VariableContext, c: Scalar) -> "Polynomial":
        c = _as_fraction(c)
        if c == 0:
            return Polynomial.zero(ctx)
        return Polynomial(ctx, {(0,) * ctx.n: c})

    @staticmethod
    def variable(ctx: VariableContext, i: int) -> "Polynomial":
        if not 0 <= i < ctx.n:
            raise IndexError(f"variable index {i} out of range for {ctx.names}")
        e = [0] * ctx.n
        e[i] = 1
        return Polynomial(ctx, {tuple(e): Fraction(1)})

    @staticmethod
    def monomial(ctx: VariableContext, exponents: tuple[int, ...], c: Scalar = 1) -> "Polynomial":
        if len(exponents) != ctx.n or any(e < 0 for e in exponents):
            raise ValueError(f"bad exponent tuple {exponents} for {ctx.names}")
        c = _as_fraction(c)
        return Polynomial(ctx, {tuple(exponents): c} if c != 0 else {})

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exp) for exp in self.terms)

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        check_same_context(self, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return Polynomial(self.ctx, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ctx, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        check_same_context(self, other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return Polynomial(self.ctx, out)

    def __rmul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: Scalar) -> "Polynomial":
        c = _as_fraction(c)
        if c == 0:
            return Polynomial.zero(self.ctx)
        return Polynomial(self.ctx, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.const(self.ctx, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def diff(self, i: int) -> "Polynomial":
        """Formal partial derivative with respect to variable ``i``."""
        if not 0 <= i < self.ctx.n:
            raise IndexError(f"variable index {i} out of range for {self.ctx.names}")
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            d = list(e)
            d[i] -= 1
            key = tuple(d)
            s = out.get(key, Fraction(0)) + c * e[i]
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        return Polynomial(self.ctx, out)

    # -- equality / printing -------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.ctx == other.ctx
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in descending graded-lexicographic order (canonical printing)."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for name, k in zip(self.ctx.names, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            body = "*".join(factors)
            if not body:
                chunk = str(c)
            elif c == 1:
                chunk = body
            elif c == -1:
                chunk = f"-{body}"
            else:
                chunk = f"{c}*{body}"
            parts.append(chunk)
        out = parts[0]
        for chunk in parts[1:]:
            out += f" - {chunk[1:]}" if chunk.startswith("-") else f" + {chunk}"
        return out

    def __repr__(self) -> str:
        return f"Polynomial({self})"


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact product in Q[x1..xn]."""
    return p * q


def poly_diff(p: Polynomial, i: int) -> Polynomial:
    """Basis derivation d/dx_i applied to p."""
    return p.diff(i)


# ---------------------------------------------------------------------------
# Exact linear algebra
# ---------------------------------------------------------------------------


@dataclass
class LinearSystem:
    """matrix . v = rhs with entries in Q; rows of equal length."""

    matrix: list[list[Fraction]]
    rhs: list[Fraction]

    def __post_init__(self):
        if len(self.matrix) != len(self.rhs):
            raise ValueError("matrix and rhs row counts differ")
        widths = {len(r) for r in self.matrix}
        if len(widths) > 1:
            raise ValueError("ragged matrix")
        self.matrix = [[_as_fraction(c) for c in row] for row in self.matrix]
        self.rhs = [_as_fraction(c) for c in self.rhs]

    @property
    def ncols(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0


@dataclass
class Solution:
    particular: list[Fraction]
    null_basis: list[list[Fraction]]
    rank: int


@dataclass
class NoSolution:
    """Certificate of inconsistency: index of the first offending reduced row."""

    row: int


def solve_exact(sys: LinearSystem) -> Solution | NoSolution:
    """Gauss-Jordan elimination over Q.

    Pivot rule: scan columns left to right, pick the first row with a nonzero
    entry (deterministic, reproducible).  Returns a particular solution with
    all free coordinates set to zero, together with a null-space basis (one
    vector per free column, unit in that column).
    """
    m = [row[:] + [b] for row, b in zip(sys.matrix, sys.rhs)]
    nrows, ncols = len(m), sys.ncols
    pivots: list[tuple[int, int]] = []
    r = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if m[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        pv = m[r][col]
        m[r] = [c / pv for c in m[r]]
        for i in range(nrows):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append((r, col))
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if m[i][ncols] != 0:
            return NoSolution(row=i)
    particular = [Fraction(0)] * ncols
    pivot_cols = {col for _, col in pivots}
    for row, col in pivots:
        particular[col] = m[row][ncols]
    null_basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, col in pivots:
            v[col] = -m[row][free]
        null_basis.append(v)
    return Solution(particular=particular, null_basis=null_basis, rank=len(pivots))


def matrix_rank(matrix: list[list[Fraction]]) -> int:
    """Exact rank; empty matrices have rank 0."""
    if not matrix or not matrix[0]:
        return 0
    sol = solve_exact(LinearSystem(matrix, [Fraction(0)] * len(matrix)))
    assert isinstance(sol, Solution)
    return sol.rank
