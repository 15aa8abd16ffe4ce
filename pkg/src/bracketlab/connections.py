"""Algebraic connections for the polynomial extension A = Q[x] into
B = Q[x, u], their curvature and connection forms, the vertical complex of a
flat connection, and commuting hierarchies.

A connection is determined by its values on the base coordinate fields,
nabla(@x_i) = @x_i + sum_a Gamma_i^a @u_a with Gamma_i^a in B, extended
B-linearly to all of D_1(A, B).  The connection form is the vector-valued
1-form U = sum_a (du_a - sum_i Gamma_i^a dx_i) (x) @u_a, and flatness of the
connection is equivalent to the vanishing of the FN self-bracket of U, which
the curvature report checks against the direct commutator formula pairwise
on base fields.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .exactalg import Polynomial, VariableContext
from .tensorcalc import Multivector, Form, contract_form, wedge_multi
from .vvforms import VForm, contract_vform_by_multivector, fn_bracket


@dataclass
class Connection:
    """Polynomial-model connection: m base variables, r fiber variables.

    gamma[(i, a)] is the @u_a component of nabla(@x_i), a polynomial in the
    total context Q[x1..xm, u1..ur].
    """

    base_names: tuple[str, ...]
    fiber_names: tuple[str, ...]
    gamma: dict[tuple[int, int], Polynomial] = field(default_factory=dict)

    def __post_init__(self):
        self.total_ctx = VariableContext(self.base_names + self.fiber_names)
        self.base_ctx = VariableContext(self.base_names)
        for (i, a), g in self.gamma.items():
            if not (0 <= i < self.m and 0 <= a < self.r):
                raise ValueError(f"bad gamma index {(i, a)}")
            if g.ctx != self.total_ctx:
                raise ValueError("gamma polynomials live in the total context")

    @property
    def m(self) -> int:
        return len(self.base_names)

    @property
    def r(self) -> int:
        return len(self.fiber_names)

    def fiber_indices(self) -> range:
        return range(self.m, self.m + self.r)

    def gamma_at(self, i: int, a: int) -> Polynomial:
        return self.gamma.get((i, a), Polynomial.zero(self.total_ctx))

    def horizontal_field(self, i: int) -> Multivector:
        """nabla(@x_i) as a derivation of B."""
        out = Multivector.basis_field(self.total_ctx, i)
        for a in range(self.r):
            g = self.gamma_at(i, a)
            if not g.is_zero():
                out = out + Multivector.basis_field(
                    self.total_ctx, self.m + a).scale(g)
        return out

    def apply(self, base_components: list[Polynomial]) -> Multivector:
        """nabla of a D_1(A,B) element given by its base components (in B)."""
        out = Multivector.zero(self.total_ctx, 1)
        for i, b in enumerate(base_components):
            if not b.is_zero():
                out = out + self.horizontal_field(i).scale(b)
        return out

    def connection_form(self) -> VForm:
        """U = sum_a (du_a - sum_i Gamma_i^a dx_i) (x) @u_a; satisfies
        i_X(U) = X - nabla(X|_A) for every field X on B."""
        ctx = self.total_ctx
        one = Polynomial.const(ctx, 1)
        coeffs: dict = {}
        for a in range(self.r):
            ua = self.m + a
            coeffs[((ua,), (ua,))] = one
            for i in range(self.m):
                g = self.gamma_at(i, a)
                if not g.is_zero():
                    coeffs[((i,), (ua,))] = g.scale(-1)
        return VForm(ctx, 1, 1, coeffs)

    def curvature(self, i: int, j: int) -> Multivector:
        """R(@x_i, @x_j) = [nabla_i, nabla_j] - nabla(nabla_i o @x_j -
        nabla_j o @x_i); the second term vanishes on coordinate fields."""
        if i == j:
            return Multivector.zero(self.total_ctx, 1)
        hi, hj = self.horizontal_field(i), self.horizontal_field(j)
        comm = _field_commutator(hi, hj)
        correction = self.apply(_ab_derivation_components(self, hi, j, hj, i))
        return comm - correction

    def is_flat(self) -> bool:
        return all(self.curvature(i, j).is_zero()
                   for i, j in itertools.combinations(range(self.m), 2))


def _field_commutator(x: Multivector, y: Multivector) -> Multivector:
    """[X, Y] of two derivations of B, componentwise."""
    ctx = x.ctx
    out = Multivector.zero(ctx, 1)
    from .tensorcalc import mv_evaluate
    for k in range(ctx.n):
        xk = Polynomial.variable(ctx, k)
        comp = mv_evaluate(x, mv_evaluate(y, xk).as_polynomial()).as_polynomial() \
            - mv_evaluate(y, mv_evaluate(x, xk).as_polynomial()).as_polynomial()
        if not comp.is_zero():
            out = out + Multivector.basis_field(ctx, k).scale(comp)
    return out


def _ab_derivation_components(conn: Connection, hi: Multivector, j: int,
                              hj: Multivector, i: int) -> list[Polynomial]:
    """Base components of nabla(X) o X' - nabla(X') o X as an A -> B
    derivation, for X = @x_i, X' = @x_j; identically zero on coordinate
    fields since their base components are constants."""
    from .tensorcalc import mv_evaluate
    comps = []
    ctx = conn.total_ctx
    for k in range(conn.m):
        xk = Polynomial.variable(ctx, k)
        # (nabla_i o @x_j)(x_k) = nabla_i(@x_j(x_k)) = nabla_i(delta_jk) = 0
        a = mv_evaluate(hi, Polynomial.const(ctx, 1) if j == k else Polynomial.zero(ctx))
        b = mv_evaluate(hj, Polynomial.const(ctx, 1) if i == k else Polynomial.zero(ctx))
        comps.append(a.as_polynomial() - b.as_polynomial())
    return comps


@dataclass
class CurvatureComparison:
    connection: Connection
    ok: bool
    details: list[str]


def curvature_vs_fn(conn: Connection) -> CurvatureComparison:
    """Check i_{X'}(i_X([[U,U]])) = 2 R(X|_A, X'|_A) for all base pairs.

    The inner contraction is by the first argument of R; with the pinned
    contraction conventions the displayed identity holds with the arguments
    in this order (transposed relative to the source display).
    """
    u = conn.connection_form()
    f = fn_bracket(u, u)
    ctx = conn.total_ctx
    details = []
    ok = True
    for i in range(conn.m):
        for j in range(conn.m):
            if i == j:
                continue
            xi = Multivector.basis_field(ctx, i)
            xj = Multivector.basis_field(ctx, j)
            once = contract_vform_by_multivector(xi, f)
            twice = contract_vform_by_multivector(xj, once)
            lhs = _vform_as_field(twice)
            rhs = conn.curvature(i, j).scale(2)
            good = lhs == rhs
            ok = ok and good
            details.append(
                f"pair ({conn.base_names[i]}, {conn.base_names[j]}): "
                f"{'ok' if good else f'MISMATCH {lhs} vs {rhs}'}")
    return CurvatureComparison(connection=conn, ok=ok, details=details)


def _vform_as_field(om: VForm) -> Multivector:
    """A (0,1)-bidegree vector-valued form is just a derivation."""
    if om.fdeg != 0:
        raise ValueError("not fully contracted")
    out = Multivector.zero(om.ctx, 1)
    for ((_, mkey), poly) in [(k, v) for k, v in om.coeffs.items()]:
        out = out + Multivector(om.ctx, 1, {mkey: poly})
    return out


def is_vertical(om: VForm, conn: Connection) -> bool:
    """Every derivation leg annihilates the base algebra."""
    fib = set(conn.fiber_indices())
    return all(mkey[0] in fib for (_, mkey) in om.coeffs)


def vertical_complex(conn: Connection, poly_degree_cap: int,
                     window: tuple[int, int]):
    """The FN-bracket complex of U restricted to vertical arguments."""
    from .cohoengine import build_complex
    return build_complex("verticalConnection", conn, poly_degree_cap, window)


def vertical_field(conn: Connection, a: int,
                   coeff: Polynomial | None = None) -> VForm:
    """@u_a (times an optional coefficient) as a vertical (0,1) element."""
    ctx = conn.total_ctx
    if coeff is None:
        coeff = Polynomial.const(ctx, 1)
    return VForm(ctx, 0, 1, {((), (conn.m + a,)): coeff})


def hierarchy(x: VForm, r: VForm, n_max: int) -> list[VForm]:
    """X_0 = X, X_{k+1} = i_{X_k}(R): iterated insertion of a vertical field
    into a vertical 1-cocycle R."""
    if x.fdeg != 0 or x.mdeg != 1:
        raise ValueError("hierarchy seeds are vertical derivations")
    if r.fdeg != 1 or r.mdeg != 1:
        raise ValueError("R must have bidegree (1,1)")
    chain = [x]
    for _ in range(n_max):
        cur = chain[-1]
        as_field = _vform_as_field(cur)
        chain.append(contract_vform_by_multivector(as_field, r))
    return chain


@dataclass
class HierarchyCheck:
    commutators_vanish: bool
    defects: dict[tuple[int, int], Multivector]
    display_matches: dict[tuple[int, int], bool]
    hypotheses_hold: bool
    h2_dimension: int | None


def hierarchy_commutator_check(conn: Connection, x: VForm, y: VForm, r: VForm,
                               m_max: int, n_max: int,
                               h2_cap: int | None = None) -> HierarchyCheck:
    """Check [X_m, Y_n] against the correction-sum display.

    When [[X,R]] = [[Y,R]] = 0 and [X,Y] = 0 the display collapses and all
    commutators must vanish exactly.  Otherwise the defect
    [X_m,Y_n] - (display right side) is reported per pair, together with the
    truncated H^2 of the vertical complex when a cap is supplied: the display
    is an identity in cohomology under H^2 = 0.
    """
    xs = hierarchy(x, r, m_max + n_max + 1)
    ys = hierarchy(y, r, m_max + n_max + 1)
    fn_xr = fn_bracket(x, r)
    fn_yr = fn_bracket(y, r)
    xy = _field_commutator(_vform_as_field(x), _vform_as_field(y))
    hypotheses = fn_xr.is_zero() and fn_yr.is_zero() and xy.is_zero()

    def iterate(v: Multivector, k: int) -> Multivector:
        out = VForm(v.ctx, 0, 1, {((), key): p for key, p in v.coeffs.items()})
        chain = hierarchy(out, r, k)
        return _vform_as_field(chain[k])

    defects = {}
    matches = {}
    vanish = True
    for mm in range(m_max + 1):
        for nn in range(n_max + 1):
            comm = _field_commutator(_vform_as_field(xs[mm]), _vform_as_field(ys[nn]))
            if not comm.is_zero():
                vanish = False
            display = iterate(xy, mm + nn)
            for i in range(nn):
                corr = contract_vform_by_multivector(_vform_as_field(ys[i]), fn_xr)
                display = display + iterate(_vform_as_field(corr), mm + nn - i - 1)
            for jj in range(mm):
                corr = contract_vform_by_multivector(_vform_as_field(xs[jj]), fn_yr)
                display = display - iterate(_vform_as_field(corr), mm + nn - jj - 1)
            defect = comm - display
            defects[(mm, nn)] = defect
            matches[(mm, nn)] = defect.is_zero()
    h2 = None
    if h2_cap is not None:
        from .cohoengine import betti
        cx = vertical_complex(conn, h2_cap, (0, 2))
        h2 = betti(cx, 2)
    return HierarchyCheck(commutators_vanish=vanish, defects=defects,
                          display_matches=matches, hypotheses_hold=hypotheses,
                          h2_dimension=h2)
