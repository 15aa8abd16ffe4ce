"""Expression grammar for the command line and workspace files.

Tokens: identifiers, rational literals (like 3 or 3/2), the operators
+ - * ^ ( ), basis 1-forms d<var>, basis derivations @<var>, and the tensor
marker # building vector-valued forms from a form and a derivation part.

Precedence, loosest to tightest:  #  <  + -  <  unary -  <  ^  <  *.
The hat is the wedge between graded elements and the power on scalars; the
operand kinds decide at parse time (a scalar exponent must be a nonnegative
integer constant).  Since # binds loosest, printed sums of tensor terms are
parenthesized term by term and re-parse to themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactalg import Polynomial, VariableContext
from .tensorcalc import Form, Multivector, wedge_forms, wedge_multi
from .vvforms import VForm, wedge_form_vform


class ExprError(ValueError):
    """Parse or evaluation failure, with a source position."""

    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} (at position {pos})")
        self.pos = pos


@dataclass
class Token:
    kind: str      # num | ident | dform | deriv | op
    text: str
    pos: int


def tokenize(src: str) -> list[Token]:
    out = []
    i, n = 0, len(src)
    while i < n:
        c = src[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            if j < n and src[j] == "/" and j + 1 < n and src[j + 1].isdigit():
                k = j + 1
                while k < n and src[k].isdigit():
                    k += 1
                out.append(Token("num", src[i:k], i))
                i = k
            else:
                out.append(Token("num", src[i:j], i))
                i = j
            continue
        if c == "@":
            j = i + 1
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            if j == i + 1:
                raise ExprError("expected a variable name after '@'", i)
            out.append(Token("deriv", src[i + 1:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            out.append(Token("ident", src[i:j], i))
            i = j
            continue
        if c in "+-*^()#":
            out.append(Token("op", c, i))
            i += 1
            continue
        raise ExprError(f"unexpected character {c!r}", i)
    return out


# value kinds: Polynomial | Multivector | Form | VForm


def _kind(v) -> str:
    if isinstance(v, Polynomial):
        return "poly"
    if isinstance(v, Multivector):
        return "mv"
    if isinstance(v, Form):
        return "form"
    return "vform"


def _add(a, b, pos):
    ka, kb = _kind(a), _kind(b)
    if ka == kb:
        try:
            return a + b
        except ValueError as e:
            raise ExprError(str(e), pos) from None
    # allow zero graded elements to absorb into scalars and vice versa
    if ka == "poly" and kb in ("mv", "form"):
        return _add(_promote(a, kb), b, pos)
    if kb == "poly" and ka in ("mv", "form"):
        return _add(a, _promote(b, ka), pos)
    raise ExprError(f"cannot add {ka} and {kb}", pos)


def _promote(p: Polynomial, kind: str):
    if kind == "mv":
        return Multivector.from_polynomial(p)
    return Form.from_polynomial(p)


def _mul(a, b, pos):
    ka, kb = _kind(a), _kind(b)
    if ka == "poly" and kb == "poly":
        return a * b
    if ka == "poly":
        return b.scale(a)
    if kb == "poly":
        return a.scale(b)
    raise ExprError(f"'*' needs a scalar factor; use '^' to wedge {ka} and {kb}", pos)


def _hat(a, b, pos):
    ka, kb = _kind(a), _kind(b)
    if ka == "poly" and kb == "poly":
        if not b.is_constant():
            raise ExprError("exponent must be a constant", pos)
        c = b.constant_value()
        if c.denominator != 1 or c < 0:
            raise ExprError("exponent must be a nonnegative integer", pos)
        return a ** int(c)
    if ka == "poly":
        return b.scale(a)
    if kb == "poly":
        return a.scale(b)
    if ka == "mv" and kb == "mv":
        return wedge_multi(a, b)
    if ka == "form" and kb == "form":
        return wedge_forms(a, b)
    if ka == "form" and kb == "vform":
        return wedge_form_vform(a, b)
    raise ExprError(f"cannot wedge {ka} and {kb}", pos)


def _tensor(a, b, pos):
    ka, kb = _kind(a), _kind(b)
    if ka == "poly":
        a, ka = Form.from_polynomial(a), "form"
    if kb == "poly":
        b, kb = Multivector.from_polynomial(b), "mv"
    if ka == "form" and kb == "mv":
        return VForm.from_tensor(a, b)
    raise ExprError(f"'#' needs form # derivation, got {ka} # {kb}", pos)


class Parser:
    """Pratt parser over the token list; bindings resolve bare identifiers
    that are not context variables."""

    def __init__(self, tokens: list[Token], ctx: VariableContext,
                 bindings: dict | None = None):
        self.tokens = tokens
        self.ctx = ctx
        self.bindings = bindings or {}
        self.i = 0

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> Token:
        t = self.peek()
        if t is None:
            raise ExprError("unexpected end of input",
                            self.tokens[-1].pos + 1 if self.tokens else 0)
        self.i += 1
        return t

    # binding powers
    BP = {"#": 5, "+": 10, "-": 10, "^": 20, "*": 30}

    def parse(self, min_bp: int = 0):
        value = self.atom()
        while True:
            t = self.peek()
            if t is None or t.kind != "op" or t.text not in self.BP:
                break
            bp = self.BP[t.text]
            if bp < min_bp:
                break
            self.next()
            rhs = self.parse(bp + 1)
            if t.text == "+":
                value = _add(value, rhs, t.pos)
            elif t.text == "-":
                value = _add(value, _negate(rhs), t.pos)
            elif t.text == "*":
                value = _mul(value, rhs, t.pos)
            elif t.text == "^":
                value = _hat(value, rhs, t.pos)
            else:
                value = _tensor(value, rhs, t.pos)
        return value

    def atom(self):
        t = self.next()
        if t.kind == "op" and t.text == "(":
            v = self.parse(0)
            closing = self.next()
            if closing.kind != "op" or closing.text != ")":
                raise ExprError("expected ')'", closing.pos)
            return v
        if t.kind == "op" and t.text == "-":
            return _negate(self.parse(15))
        if t.kind == "num":
            if "/" in t.text:
                num, den = t.text.split("/")
                return Polynomial.const(self.ctx, Fraction(int(num), int(den)))
            return Polynomial.const(self.ctx, int(t.text))
        if t.kind == "deriv":
            try:
                return Multivector.basis_field(self.ctx, self.ctx.index(t.text))
            except KeyError:
                raise ExprError(f"unknown variable {t.text!r} after '@'", t.pos) from None
        if t.kind == "ident":
            name = t.text
            if name in self.ctx.names:
                return Polynomial.variable(self.ctx, self.ctx.index(name))
            if name.startswith("d") and name[1:] in self.ctx.names:
                return Form.basis_one_form(self.ctx, self.ctx.index(name[1:]))
            if name in self.bindings:
                return self.bindings[name]
            raise ExprError(f"unknown identifier {name!r}", t.pos)
        raise ExprError(f"unexpected token {t.text!r}", t.pos)


def _negate(v):
    if isinstance(v, Polynomial):
        return -v
    return v.scale(-1)


def parse(src: str, ctx: VariableContext, bindings: dict | None = None):
    tokens = tokenize(src)
    if not tokens:
        raise ExprError("empty expression", 0)
    parser = Parser(tokens, ctx, bindings)
    value = parser.parse(0)
    t = parser.peek()
    if t is not None:
        raise ExprError(f"trailing input {t.text!r}", t.pos)
    return value


def identifiers_in(src: str) -> set[str]:
    """Variable-name candidates in an expression: bare identifiers, plus the
    targets of @ and d prefixes."""
    names = set()
    for t in tokenize(src):
        if t.kind == "deriv":
            names.add(t.text)
        elif t.kind == "ident":
            names.add(t.text)
    return names


def print_element(v) -> str:
    """Canonical printing; parse(print_element(v)) == v."""
    if isinstance(v, VForm):
        return _print_vform(v)
    return str(v)


def _print_vform(om: VForm) -> str:
    if om.is_zero():
        return "0"
    names = om.ctx.names
    parts = []
    for (fkey, mkey) in sorted(om.coeffs):
        poly = om.coeffs[(fkey, mkey)]
        fpart = "^".join(f"d{names[i]}" for i in fkey) or "1"
        mpart = "^".join(f"@{names[i]}" for i in mkey) or "1"
        body = str(poly)
        if body == "1":
            term = f"({fpart}#{mpart})"
            sign = "+"
        elif body == "-1":
            term = f"({fpart}#{mpart})"
            sign = "-"
        elif len(poly.terms) == 1 and not body.startswith("-"):
            term = f"({body}*{fpart}#{mpart})"
            sign = "+"
        elif len(poly.terms) == 1:
            term = f"({body[1:]}*{fpart}#{mpart})"
            sign = "-"
        else:
            term = f"(({body})*{fpart}#{mpart})"
            sign = "+"
        parts.append((sign, term))
    sign, term = parts[0]
    out = term if sign == "+" else f"-{term}"
    for sign, term in parts[1:]:
        out += f" {sign} {term}"
    return out
