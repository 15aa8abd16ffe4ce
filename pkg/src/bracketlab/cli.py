"""bracketlab command line: every operation behind subcommands that parse
expressions, run the exact calculus, and print text or JSON.

Exit codes: 0 on success, 2 on mathematical failure verdicts (NoSolution
from the Magri solver, NoRepresentative from bracket extraction), 1 on usage
errors.  The environment variable BRACKETLAB_MAX_DEGREE (default 8) caps the
polynomial degree of every parsed input and every --cap argument.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .exactalg import NoSolution, Polynomial, VariableContext
from .tensorcalc import (Form, Multivector, contract_form, contract_multi,
                         de_rham, lie_form, schouten, schouten_oracle)
from .vvforms import (BracketProblem, ExtractedElement, NoRepresentative,
                      TargetSpace, VForm, extract_bracket, fn_bracket,
                      is_integrable, lie_by_vform, lie_general, nr_bracket,
                      vv_contract)
from .poisson import (PoissonStructure, compatible, extended_bracket,
                      involution_check, jacobi_defect, magri_chain,
                      poisson_bracket)
from .cohoengine import betti_table, build_complex, interpret_H
from .connections import (Connection, curvature_vs_fn, hierarchy,
                          vertical_complex, vertical_field)
from .symbols import (BRACKET_ORIENTATION, SymbolContext, Symbol,
                      symbol_bracket)
from .expr import ExprError, identifiers_in, parse, print_element
from . import workspace as ws_mod

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


class CliParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def max_degree_cap() -> int:
    raw = os.environ.get("BRACKETLAB_MAX_DEGREE", "8")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"BRACKETLAB_MAX_DEGREE must be an integer, got {raw!r}")


def _element_degree(v) -> int:
    if isinstance(v, Polynomial):
        return v.total_degree()
    degs = [p.total_degree() for p in v.coeffs.values()]
    return max(degs, default=-1)


def _check_degree(v) -> None:
    cap = max_degree_cap()
    if _element_degree(v) > cap:
        raise UsageError(
            f"input polynomial degree {_element_degree(v)} exceeds the "
            f"BRACKETLAB_MAX_DEGREE cap {cap}")


def _check_cap_arg(value: int) -> None:
    cap = max_degree_cap()
    if value > cap:
        raise UsageError(f"--cap {value} exceeds the BRACKETLAB_MAX_DEGREE cap {cap}")


def build_context(args, exprs: list[str]):
    """Context from --workspace, --vars, or inferred sorted identifiers."""
    ws = None
    if getattr(args, "workspace", None):
        ws = ws_mod.load(args.workspace)
        return ws.ctx, ws.bindings
    if getattr(args, "vars", None):
        names = tuple(s.strip() for s in args.vars.split(",") if s.strip())
        return VariableContext(names), {}
    names = set()
    for e in exprs:
        if e:
            names |= identifiers_in(e)
    # drop d<var> spellings that shadow a shorter variable
    cleaned = set(names)
    for nm in names:
        if nm.startswith("d") and nm[1:] in names:
            cleaned.discard(nm)
    if not cleaned:
        raise UsageError("no variables found; pass --vars")
    return VariableContext(tuple(sorted(cleaned))), {}


def _parse(src: str, ctx, bindings):
    try:
        v = parse(src, ctx, bindings)
    except ExprError as e:
        raise UsageError(str(e))
    _check_degree(v)
    return v


def emit(args, text_lines: list[str], payload: dict) -> None:
    if args.json:
        payload = {"schema_version": SCHEMA_VERSION, **payload}
        print(json.dumps(payload, sort_keys=True, default=str))
    else:
        for line in text_lines:
            print(line)


def _window(spec: str) -> tuple[int, int]:
    try:
        lo, hi = spec.split("..")
        return int(lo), int(hi)
    except ValueError:
        raise UsageError(f"bad window {spec!r}; expected like 0..2")


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def cmd_schouten(args) -> int:
    ctx, binds = build_context(args, [args.a, args.b])
    x = _parse(args.a, ctx, binds)
    y = _parse(args.b, ctx, binds)
    if isinstance(x, Polynomial):
        x = Multivector.from_polynomial(x)
    if isinstance(y, Polynomial):
        y = Multivector.from_polynomial(y)
    result = schouten(x, y)
    agree = result == schouten_oracle(x, y)
    emit(args, [f"[[a,b]] = {print_element(result)}",
                f"oracle agreement: {'yes' if agree else 'NO'}"],
         {"command": "schouten", "result": print_element(result),
          "oracle_agreement": agree})
    return 0


def cmd_fn(args) -> int:
    ctx, binds = build_context(args, [args.a, args.b])
    a = _parse(args.a, ctx, binds)
    b = _parse(args.b, ctx, binds)
    result = fn_bracket(a, b)
    emit(args, [f"[[a,b]]_FN = {print_element(result)}"],
         {"command": "fn", "result": print_element(result)})
    return 0


def cmd_nr(args) -> int:
    ctx, binds = build_context(args, [args.a, args.b])
    a = _parse(args.a, ctx, binds)
    b = _parse(args.b, ctx, binds)
    result = nr_bracket(a, b)
    emit(args, [f"[a,b]_NR = {print_element(result)}"],
         {"command": "nr", "result": print_element(result)})
    return 0


def cmd_lie(args) -> int:
    ctx, binds = build_context(args, [args.op, args.e])
    op = _parse(args.op, ctx, binds)
    w = _parse(args.e, ctx, binds)
    if isinstance(w, Polynomial):
        w = Form.from_polynomial(w)
    if isinstance(op, Polynomial):
        op = Multivector.from_polynomial(op)
    if isinstance(op, Multivector):
        result = lie_form(op, w)
    elif isinstance(op, VForm):
        result = lie_general(op, w)
    else:
        raise UsageError("the operator argument must be a multivector or a vector-valued form")
    emit(args, [f"L = {print_element(result)}"],
         {"command": "lie", "result": print_element(result)})
    return 0


def cmd_contract(args) -> int:
    ctx, binds = build_context(args, [args.a, args.b])
    a = _parse(args.a, ctx, binds)
    b = _parse(args.b, ctx, binds)
    if isinstance(a, Polynomial):
        a = Form.from_polynomial(a)
    if isinstance(b, Polynomial):
        b = Form.from_polynomial(b)
    if isinstance(a, Multivector) and isinstance(b, Form):
        result = contract_form(a, b)
    elif isinstance(a, Form) and isinstance(b, Multivector):
        result = contract_multi(a, b)
    elif isinstance(a, VForm) and isinstance(b, Form):
        result = vv_contract(a, b)
    else:
        raise UsageError("contract expects (multivector, form), (form, multivector) "
                         "or (vform, form)")
    emit(args, [f"i = {print_element(result)}"],
         {"command": "contract", "result": print_element(result)})
    return 0


def cmd_d(args) -> int:
    ctx, binds = build_context(args, [args.e])
    w = _parse(args.e, ctx, binds)
    if isinstance(w, Polynomial):
        w = Form.from_polynomial(w)
    if not isinstance(w, Form):
        raise UsageError("d expects a form")
    result = de_rham(w)
    emit(args, [f"d = {print_element(result)}"],
         {"command": "d", "result": print_element(result)})
    return 0


def cmd_poisson_check(args) -> int:
    ctx, binds = build_context(args, [args.e])
    p = _parse(args.e, ctx, binds)
    if not isinstance(p, Multivector) or p.degree != 2:
        raise UsageError("poisson-check expects a bivector")
    defect = jacobi_defect(p)
    if defect.is_zero():
        emit(args, ["Poisson: yes ([[P,P]] = 0)"],
             {"command": "poisson-check", "poisson": True, "defect": "0"})
    else:
        emit(args, ["Poisson: no ([[P,P]] != 0)",
                    f"defect = {print_element(defect)}"],
             {"command": "poisson-check", "poisson": False,
              "defect": print_element(defect)})
    return 0


def _parse_poisson(src: str, ctx, binds) -> PoissonStructure:
    p = _parse(src, ctx, binds)
    if not isinstance(p, Multivector) or p.degree != 2:
        raise UsageError("expected a bivector")
    ps = PoissonStructure.verify(p)
    if not ps.verified:
        raise UsageError("bivector is not Poisson: [[P,P]] != 0")
    return ps


def cmd_poisson_coho(args) -> int:
    ctx, binds = build_context(args, [args.P])
    _check_cap_arg(args.cap)
    ps = _parse_poisson(args.P, ctx, binds)
    window = _window(args.window)
    cx = build_complex("poissonCochain", ps, args.cap, window)
    table = betti_table(cx)
    emit(args, ["Betti table " + ",".join(str(b) for b in table)],
         {"command": "poisson-coho", "betti": table, "window": list(window),
          "cap": args.cap, "caps_per_position": cx.caps[:-1]})
    return 0


def cmd_poisson_homo(args) -> int:
    ctx, binds = build_context(args, [args.P])
    _check_cap_arg(args.cap)
    ps = _parse_poisson(args.P, ctx, binds)
    window = _window(args.window)
    cx = build_complex("poissonChain", ps, args.cap, window)
    table = betti_table(cx)
    grades = cx.grades[:-1]
    emit(args, ["Betti table " + ",".join(str(b) for b in table)
                + "  (grades " + ",".join(str(g) for g in grades) + ")"],
         {"command": "poisson-homo", "betti": table, "grades": grades,
          "cap": args.cap})
    return 0


def cmd_extended_bracket(args) -> int:
    ctx, binds = build_context(args, [args.P, args.a, args.b])
    ps = _parse_poisson(args.P, ctx, binds)
    a = _parse(args.a, ctx, binds)
    b = _parse(args.b, ctx, binds)
    if isinstance(a, Polynomial):
        a = Form.from_polynomial(a)
    if isinstance(b, Polynomial):
        b = Form.from_polynomial(b)
    result = extended_bracket(ps, a, b)
    emit(args, [f"{{a,b}}_P = {print_element(result)}"],
         {"command": "extended-bracket", "result": print_element(result)})
    return 0


def cmd_compatible(args) -> int:
    ctx, binds = build_context(args, [args.P, args.Q])
    p = _parse_poisson(args.P, ctx, binds)
    q = _parse_poisson(args.Q, ctx, binds)
    rep = compatible(p.bivector, q.bivector)
    lines = [f"compatible: {'yes' if rep.compatible else 'no'}"]
    if not rep.compatible:
        lines.append(f"[[P,Q]] = {print_element(rep.defect)}")
    emit(args, lines, {"command": "compatible", "compatible": rep.compatible,
                       "defect": print_element(rep.defect)})
    return 0


def cmd_magri(args) -> int:
    ctx, binds = build_context(args, [args.P, args.Q, args.seed])
    _check_cap_arg(args.cap)
    p = _parse_poisson(args.P, ctx, binds)
    q = _parse_poisson(args.Q, ctx, binds)
    seed = _parse(args.seed, ctx, binds)
    if not isinstance(seed, Polynomial):
        raise UsageError("the seed must be a polynomial")
    if args.steps < 1:
        raise UsageError("--steps counts the chain length and must be >= 1")
    chain = magri_chain(p, q, seed, args.steps - 1, args.cap)
    if isinstance(chain, NoSolution):
        emit(args, [f"NoSolution: the degree-{args.cap} ansatz is inconsistent"],
             {"command": "magri", "verdict": "NoSolution", "cap": args.cap})
        return 2
    inv = involution_check(p, q, chain)
    elems = ", ".join(str(e) for e in chain.elements)
    emit(args, [f"chain {elems}",
                f"involution: {'ok' if inv else 'FAILED'} "
                "({a_i,a_j}_P = {a_i,a_j}_Q = 0 for all pairs)"],
         {"command": "magri", "chain": [str(e) for e in chain.elements],
          "involution": inv, "cap": args.cap})
    return 0


def cmd_symbols_bracket(args) -> int:
    if not args.vars:
        raise UsageError("symbols-bracket needs --vars (the base variables)")
    base = VariableContext(tuple(s.strip() for s in args.vars.split(",") if s.strip()))
    sctx = SymbolContext.build(base)
    a = _parse(args.a, sctx.total, {})
    b = _parse(args.b, sctx.total, {})
    if not isinstance(a, Polynomial) or not isinstance(b, Polynomial):
        raise UsageError("symbols are polynomials in the base and fiber variables")
    sa = _as_symbol(sctx, a)
    sb = _as_symbol(sctx, b)
    result = symbol_bracket(sa, sb)
    emit(args, [f"{{a,b}} = {result}",
                f"orientation vs canonical formula: {BRACKET_ORIENTATION:+d}"],
         {"command": "symbols-bracket", "result": str(result),
          "orientation": BRACKET_ORIENTATION})
    return 0


def _as_symbol(sctx: SymbolContext, p: Polynomial) -> Symbol:
    n = sctx.n
    grades = {sum(e[n:]) for e in p.terms}
    if len(grades) > 1:
        raise UsageError("symbol is not homogeneous in the fiber variables")
    grade = grades.pop() if grades else 0
    return Symbol(sctx, grade, p)


def _connection_from_args(args) -> Connection:
    if not args.base or not args.fiber:
        raise UsageError("pass --base and --fiber variable lists")
    base = tuple(s.strip() for s in args.base.split(",") if s.strip())
    fiber = tuple(s.strip() for s in args.fiber.split(",") if s.strip())
    total = VariableContext(base + fiber)
    gamma = {}
    if args.gamma:
        entries = [s.strip() for s in args.gamma.split(",")]
        if len(entries) != len(base) * len(fiber):
            raise UsageError(
                f"--gamma needs {len(base) * len(fiber)} entries "
                "(base-major order), got " + str(len(entries)))
        k = 0
        for i in range(len(base)):
            for a in range(len(fiber)):
                val = _parse(entries[k], total, {})
                if not isinstance(val, Polynomial):
                    raise UsageError("gamma entries must be polynomials")
                if not val.is_zero():
                    gamma[(i, a)] = val
                k += 1
    return Connection(base, fiber, gamma)


def cmd_connection_curvature(args) -> int:
    conn = _connection_from_args(args)
    lines = []
    payload = {"command": "connection-curvature", "curvature": {}}
    for i in range(conn.m):
        for j in range(i + 1, conn.m):
            r = conn.curvature(i, j)
            lines.append(f"R({conn.base_names[i]},{conn.base_names[j]}) = {print_element(r)}")
            payload["curvature"][f"{conn.base_names[i]},{conn.base_names[j]}"] = print_element(r)
    flat = conn.is_flat()
    rep = curvature_vs_fn(conn)
    lines.append(f"flat: {'yes' if flat else 'no'}")
    lines.append(f"self-bracket identity: {'ok' if rep.ok else 'FAILED'}")
    payload["flat"] = flat
    payload["fn_identity"] = rep.ok
    emit(args, lines, payload)
    return 0


def cmd_vertical_coho(args) -> int:
    _check_cap_arg(args.cap)
    conn = _connection_from_args(args)
    window = _window(args.window)
    cx = vertical_complex(conn, args.cap, window)
    table = betti_table(cx)
    lines = ["Betti table " + ",".join(str(b) for b in table)]
    reports = []
    if args.classes:
        for t in cx.positions():
            rep = interpret_H(cx, t)
            for cl in rep.classes:
                lines.append(f"H^{rep.grade}: {cl.label}: {print_element(cl.representative)}")
            reports.append({"grade": rep.grade, "dimension": rep.dimension,
                            "classes": [print_element(c.representative) for c in rep.classes],
                            "notes": rep.notes})
    emit(args, lines, {"command": "vertical-coho", "betti": table,
                       "window": list(window), "reports": reports})
    return 0


def cmd_hierarchy(args) -> int:
    conn = _connection_from_args(args)
    ctx = conn.total_ctx
    x = _parse(args.X, ctx, {})
    r = _parse(args.R, ctx, {})
    if isinstance(x, Multivector):
        x = VForm(ctx, 0, 1, {((), key): p for key, p in x.coeffs.items()})
    if not isinstance(x, VForm) or not isinstance(r, VForm):
        raise UsageError("hierarchy expects a vertical field -X and a (1,1) element -R")
    chain = hierarchy(x, r, args.steps)
    lines = [f"X_{k} = {print_element(e)}" for k, e in enumerate(chain)]
    emit(args, lines, {"command": "hierarchy",
                       "chain": [print_element(e) for e in chain]})
    return 0


def cmd_extract_bracket(args) -> int:
    ctx, binds = build_context(args, [args.a, args.b, getattr(args, "P", None) or ""])
    _check_cap_arg(args.cap)
    a = _parse(args.a, ctx, binds)
    b = _parse(args.b, ctx, binds)
    from .tensorcalc import lie_by_multivector
    from .vvforms import lie_p_by_vform, poisson_boundary

    if args.setting == "schouten":
        if not isinstance(a, Multivector) or not isinstance(b, Multivector):
            raise UsageError("schouten setting expects two multivectors")
        target = TargetSpace(("multivector", a.degree + b.degree - 1))
        prob = BracketProblem(lie_by_multivector(a), lie_by_multivector(b),
                              target, args.cap, ctx)
    elif args.setting == "fn":
        if not isinstance(a, VForm) or not isinstance(b, VForm):
            raise UsageError("fn setting expects two vector-valued forms")
        target = TargetSpace(("vform", 1, a.fdeg + b.fdeg))
        prob = BracketProblem(lie_by_vform(a), lie_by_vform(b), target, args.cap, ctx)
    elif args.setting == "deRham":
        if not isinstance(a, VForm) or not isinstance(b, VForm):
            raise UsageError("deRham setting expects two vector-valued forms")
        mdeg = args.target_mdeg if args.target_mdeg is not None else a.mdeg
        fdeg = args.target_fdeg if args.target_fdeg is not None else \
            a.fdeg + b.fdeg - (a.mdeg + b.mdeg) + mdeg - 1 + 1
        target = TargetSpace(("vform", mdeg, fdeg))
        prob = BracketProblem(lie_by_vform(a), lie_by_vform(b), target, args.cap, ctx)
    elif args.setting == "poisson":
        if not args.P:
            raise UsageError("poisson setting needs -P")
        ps = _parse_poisson(args.P, ctx, binds)
        if not isinstance(a, VForm) or not isinstance(b, VForm):
            raise UsageError("poisson setting expects two vector-valued forms")
        target = TargetSpace(("vform", a.mdeg + b.mdeg, 1), ("poisson", ps.bivector))
        prob = BracketProblem(lie_p_by_vform(ps.bivector, a),
                              lie_p_by_vform(ps.bivector, b), target, args.cap, ctx)
    else:
        raise UsageError(f"unknown setting {args.setting!r}")

    result = extract_bracket(prob)
    if isinstance(result, NoRepresentative):
        emit(args, [f"NoRepresentative (coefficient degree cap {result.degree_cap})",
                    f"witness argument: {print_element(result.witness)}"],
             {"command": "extract-bracket", "verdict": "NoRepresentative",
              "cap": result.degree_cap, "witness": print_element(result.witness)})
        return 2
    emit(args, [f"element = {print_element(result.element)}",
                f"kernel dimension = {result.kernel_dimension}"],
         {"command": "extract-bracket", "element": print_element(result.element),
          "kernel_dimension": result.kernel_dimension})
    return 0


# ---------------------------------------------------------------------------


def make_parser() -> CliParser:
    p = CliParser(prog="bracketlab",
                  description="exact bracket calculus over Q[x1..xn]")
    p.add_argument("--json", action="store_true", help="JSON output")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--vars", help="comma-separated variable list")
        sp.add_argument("--workspace", "-w", help="workspace file (*.blab.json)")

    sp = sub.add_parser("schouten"); common(sp)
    sp.add_argument("-a", required=True); sp.add_argument("-b", required=True)
    sp.set_defaults(fn=cmd_schouten)

    sp = sub.add_parser("fn"); common(sp)
    sp.add_argument("-a", required=True); sp.add_argument("-b", required=True)
    sp.set_defaults(fn=cmd_fn)

    sp = sub.add_parser("nr"); common(sp)
    sp.add_argument("-a", required=True); sp.add_argument("-b", required=True)
    sp.set_defaults(fn=cmd_nr)

    sp = sub.add_parser("lie"); common(sp)
    sp.add_argument("--op", required=True, help="multivector or vector-valued form")
    sp.add_argument("-e", required=True, help="the form acted on")
    sp.set_defaults(fn=cmd_lie)

    sp = sub.add_parser("contract"); common(sp)
    sp.add_argument("-a", required=True); sp.add_argument("-b", required=True)
    sp.set_defaults(fn=cmd_contract)

    sp = sub.add_parser("d"); common(sp)
    sp.add_argument("-e", required=True)
    sp.set_defaults(fn=cmd_d)

    sp = sub.add_parser("poisson-check"); common(sp)
    sp.add_argument("-e", required=True)
    sp.set_defaults(fn=cmd_poisson_check)

    sp = sub.add_parser("poisson-coho"); common(sp)
    sp.add_argument("-P", required=True)
    sp.add_argument("--cap", type=int, default=2)
    sp.add_argument("--window", default="0..2")
    sp.set_defaults(fn=cmd_poisson_coho)

    sp = sub.add_parser("poisson-homo"); common(sp)
    sp.add_argument("-P", required=True)
    sp.add_argument("--cap", type=int, default=2)
    sp.add_argument("--window", default="0..2")
    sp.set_defaults(fn=cmd_poisson_homo)

    sp = sub.add_parser("extended-bracket"); common(sp)
    sp.add_argument("-P", required=True)
    sp.add_argument("-a", required=True); sp.add_argument("-b", required=True)
    sp.set_defaults(fn=cmd_extended_bracket)

    sp = sub.add_parser("compatible"); common(sp)
    sp.add_argument("-P", required=True); sp.add_argument("-Q", required=True)
    sp.set_defaults(fn=cmd_compatible)

    sp = sub.add_parser("magri"); common(sp)
    sp.add_argument("-P", required=True); sp.add_argument("-Q", required=True)
    sp.add_argument("--seed", required=True)
    sp.add_argument("--steps", type=int, default=3)
    sp.add_argument("--cap", type=int, default=3)
    sp.set_defaults(fn=cmd_magri)

    sp = sub.add_parser("symbols-bracket"); common(sp)
    sp.add_argument("-a", required=True); sp.add_argument("-b", required=True)
    sp.set_defaults(fn=cmd_symbols_bracket)

    sp = sub.add_parser("connection-curvature")
    sp.add_argument("--json-unused", action="store_true", help=argparse.SUPPRESS)
    sp.add_argument("--base", required=True)
    sp.add_argument("--fiber", required=True)
    sp.add_argument("--gamma", default="")
    sp.set_defaults(fn=cmd_connection_curvature)

    sp = sub.add_parser("vertical-coho")
    sp.add_argument("--base", required=True)
    sp.add_argument("--fiber", required=True)
    sp.add_argument("--gamma", default="")
    sp.add_argument("--cap", type=int, default=2)
    sp.add_argument("--window", default="0..2")
    sp.add_argument("--classes", action="store_true",
                    help="list representative cocycles per class")
    sp.set_defaults(fn=cmd_vertical_coho)

    sp = sub.add_parser("hierarchy")
    sp.add_argument("--base", required=True)
    sp.add_argument("--fiber", required=True)
    sp.add_argument("--gamma", default="")
    sp.add_argument("-X", required=True)
    sp.add_argument("-R", required=True)
    sp.add_argument("--steps", type=int, default=3)
    sp.set_defaults(fn=cmd_hierarchy)

    sp = sub.add_parser("extract-bracket"); common(sp)
    sp.add_argument("--setting", required=True,
                    choices=["schouten", "fn", "deRham", "poisson"])
    sp.add_argument("-a", required=True); sp.add_argument("-b", required=True)
    sp.add_argument("-P", default=None)
    sp.add_argument("--cap", type=int, default=2)
    sp.add_argument("--target-mdeg", type=int, default=None)
    sp.add_argument("--target-fdeg", type=int, default=None)
    sp.set_defaults(fn=cmd_extract_bracket)

    return p


def main(argv=None) -> int:
    argv = argv if argv is not None else sys.argv[1:]
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except (ExprError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
