"""Workspace files: named variable contexts and element bindings.

The on-disk format is JSON with a version field, the ordered variable list,
an optional base/fiber split for connection work, and definitions as
expression strings (kept textual so files stay hand-editable):

    {"version": 1,
     "vars": ["x", "y", "u"],
     "fiber_split": {"base": 2, "fiber": 1},
     "defs": {"P": "@x^@y", "N": "(dx#@x) + (du#@u)"}}

Definitions are parsed in file order and may reference earlier names.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .exactalg import VariableContext
from .expr import ExprError, parse, print_element

FORMAT_VERSION = 1


@dataclass
class Workspace:
    ctx: VariableContext
    fiber_split: tuple[int, int] | None = None   # (base count, fiber count)
    bindings: dict = field(default_factory=dict)
    def_sources: dict = field(default_factory=dict)

    def define(self, name: str, src: str) -> None:
        if name in self.bindings:
            raise ValueError(f"name {name!r} already bound")
        if name in self.ctx.names:
            raise ValueError(f"name {name!r} shadows a variable")
        value = parse(src, self.ctx, self.bindings)
        self.bindings[name] = value
        self.def_sources[name] = src

    def eval(self, src: str):
        return parse(src, self.ctx, self.bindings)

    def roundtrip_ok(self) -> bool:
        """Every binding reprints to an expression parsing back to itself."""
        for name, value in self.bindings.items():
            again = parse(print_element(value), self.ctx, self.bindings)
            if _semantic_neq(again, value):
                return False
        return True


def _semantic_neq(a, b) -> bool:
    from .exactalg import Polynomial
    from .tensorcalc import Form, Multivector
    if type(a) is type(b):
        return a != b
    # degree-0 graded elements print as bare polynomials
    if isinstance(a, Polynomial) and isinstance(b, (Multivector, Form)) and b.degree == 0:
        return a != b.as_polynomial()
    if isinstance(b, Polynomial) and isinstance(a, (Multivector, Form)) and a.degree == 0:
        return b != a.as_polynomial()
    return True


def load(path: str) -> Workspace:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if data.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported workspace version {data.get('version')!r}")
    ctx = VariableContext(tuple(data["vars"]))
    fiber_split = None
    if "fiber_split" in data and data["fiber_split"] is not None:
        fs = data["fiber_split"]
        if fs["base"] + fs["fiber"] != ctx.n:
            raise ValueError("fiber_split does not cover the variable list")
        fiber_split = (fs["base"], fs["fiber"])
    ws = Workspace(ctx=ctx, fiber_split=fiber_split)
    for name, src in data.get("defs", {}).items():
        ws.define(name, src)
    return ws


def save(ws: Workspace, path: str) -> None:
    data = {
        "version": FORMAT_VERSION,
        "vars": list(ws.ctx.names),
        "defs": dict(ws.def_sources),
    }
    if ws.fiber_split is not None:
        data["fiber_split"] = {"base": ws.fiber_split[0], "fiber": ws.fiber_split[1]}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
