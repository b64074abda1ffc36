"""Expression text parser.

Grammar (whitespace insignificant, unary minus only at an expression head,
which includes the inside of parentheses):

    expr    := ["-"] term {("+"|"-") term}
    term    := factor {("*"|"/") factor}
    factor  := base ["^" uint]
    base    := number | "sqrt2" | var | trig | "(" expr ")"
    trig    := ("sin"|"cos") "(" [uint "*"] "phi" ")"
    var     := "x"|"y"|"z"|"x1"|"x2"|"x3"|"rho"|"phi"
    number  := uint

(A rational like 3/2 arrives through the division rule with identical
value.) The allowed variable set decides the frame: rho/phi select the
cylindrical frame, everything else the cartesian one, and "z" means the
third cartesian axis unless rho or phi is allowed. Angular dependence is
only representable through sin/cos harmonics, so a bare phi outside a
trig call is rejected.
"""
from __future__ import annotations

import re as _re
from fractions import Fraction
from typing import Iterable, Union

from .errors import ParseError
from .polys import CARTESIAN_VARS, CYLINDRICAL_VARS, Poly, RationalExpr
from .scalars import SQRT2, Scalar
from .trig import TrigPoly

_TOKEN_RE = _re.compile(r"\s*(?:(\d+)|([a-zA-Z][a-zA-Z0-9]*)|([-+*/^()]))")

_CART_AXES = {"x": 0, "x1": 0, "y": 1, "x2": 1, "z": 2, "x3": 2}
# "xi" is the screw-angle spelling: same trig algebra as phi, used by the
# screw construction which then re-tags the harmonics onto phi - z/b_z
_ALL_VARS = {"x", "y", "z", "x1", "x2", "x3", "rho", "phi", "xi"}

ExprValue = Union[RationalExpr, TrigPoly]


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.end() == match.start():
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise ParseError(f"unexpected character {stripped[0]!r}", at)
        if match.group(1) is not None:
            tokens.append(("INT", int(match.group(1)), match.start(1)))
        elif match.group(2) is not None:
            tokens.append(("NAME", match.group(2), match.start(2)))
        else:
            tokens.append(("SYM", match.group(3), match.start(3)))
        pos = match.end()
    tokens.append(("END", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Iterable[str]):
        allowed = set(variables)
        unknown = allowed - _ALL_VARS
        if unknown:
            raise ValueError(f"unknown variable names in allowed set: {sorted(unknown)}")
        cylindrical = bool(allowed & {"rho", "phi", "xi"})
        if cylindrical and allowed & (set(_CART_AXES) - {"z"}):
            raise ValueError("cannot mix cartesian and cylindrical variables")
        if {"phi", "xi"} <= allowed:
            raise ValueError("allow either phi or xi as the angle, not both")
        self.allowed = allowed
        self.cylindrical = cylindrical
        self.angle_name = "xi" if "xi" in allowed else "phi"
        self.vars = CYLINDRICAL_VARS if cylindrical else CARTESIAN_VARS
        self.tokens = _tokenize(text)
        self.i = 0
        self.trig_seen = False

    # -- token helpers ---------------------------------------------------

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_sym(self, sym: str):
        kind, value, pos = self.peek()
        if kind != "SYM" or value != sym:
            raise ParseError(f"expected {sym!r}", pos)
        return self.take()

    # -- value helpers -----------------------------------------------------

    def constant(self, value) -> ExprValue:
        re_val = RationalExpr.of(value, self.vars)
        return TrigPoly.of(re_val) if self.cylindrical else re_val

    def variable(self, slot: int) -> ExprValue:
        re_val = RationalExpr.variable(slot, self.vars)
        return TrigPoly.of(re_val) if self.cylindrical else re_val

    # -- grammar -----------------------------------------------------------

    def parse(self) -> ExprValue:
        value = self.expr()
        kind, tok, pos = self.peek()
        if kind != "END":
            raise ParseError(f"unexpected token {tok!r}", pos)
        return value

    def expr(self) -> ExprValue:
        negate = False
        kind, value, _ = self.peek()
        if kind == "SYM" and value == "-":
            self.take()
            negate = True
        total = self.term()
        if negate:
            total = -total
        while True:
            kind, value, _ = self.peek()
            if kind == "SYM" and value in "+-":
                self.take()
                rhs = self.term()
                total = total + rhs if value == "+" else total - rhs
            else:
                return total

    def term(self) -> ExprValue:
        total = self.factor()
        while True:
            kind, value, pos = self.peek()
            if kind == "SYM" and value in "*/":
                self.take()
                rhs = self.factor()
                if value == "*":
                    total = total * rhs
                else:
                    try:
                        total = total / rhs
                    except ZeroDivisionError:
                        raise ParseError("division by the zero polynomial", pos) from None
            else:
                return total

    def factor(self) -> ExprValue:
        value = self.base()
        kind, tok, pos = self.peek()
        if kind == "SYM" and tok == "^":
            self.take()
            kind, exp, pos = self.peek()
            if kind != "INT":
                raise ParseError("exponent must be a nonnegative integer", pos)
            self.take()
            value = value ** exp
        return value

    def base(self) -> ExprValue:
        kind, tok, pos = self.take()
        if kind == "INT":
            return self.constant(tok)
        if kind == "SYM" and tok == "(":
            inner = self.expr()
            self.expect_sym(")")
            return inner
        if kind == "NAME":
            if tok == "sqrt2":
                return self.constant(SQRT2)
            if tok in ("sin", "cos"):
                return self.trig(tok, pos)
            if tok not in _ALL_VARS:
                raise ParseError(f"unknown name {tok!r}", pos)
            if tok not in self.allowed:
                raise ParseError(f"variable {tok!r} is not allowed here", pos)
            if tok in ("phi", "xi"):
                raise ParseError("angle enters through sin/cos harmonics only", pos)
            if tok == "rho":
                return self.variable(0)
            if self.cylindrical:  # tok == "z"
                return self.variable(2)
            return self.variable(_CART_AXES[tok])
        raise ParseError(f"unexpected token {tok!r}", pos)

    def trig(self, kind_name: str, pos: int) -> ExprValue:
        angle = self.angle_name
        if not self.cylindrical or angle not in self.allowed:
            raise ParseError("trigonometric terms need the angle variable", pos)
        self.expect_sym("(")
        k = 1
        kind, tok, tpos = self.peek()
        if kind == "INT":
            self.take()
            k = tok
            kind, tok, tpos = self.peek()
            if not (kind == "SYM" and tok == "*"):
                raise ParseError(f"expected '*' between harmonic index and {angle}", tpos)
            self.take()
        kind, tok, tpos = self.take()
        if kind != "NAME" or tok != angle:
            raise ParseError(f"trig argument must be [k*]{angle}", tpos)
        self.expect_sym(")")
        self.trig_seen = True
        if k == 0:
            return self.constant(1 if kind_name == "cos" else 0)
        return TrigPoly.harmonic(k, kind_name)


def parse_expr(text: str, variables: Iterable[str] = ("x", "y", "z", "x1", "x2", "x3")
               ) -> ExprValue:
    """Parse text into a RationalExpr (no trig part) or a TrigPoly."""
    parser = _Parser(text, variables)
    value = parser.parse()
    if parser.cylindrical and isinstance(value, TrigPoly) and not parser.trig_seen:
        return value.as_ratexpr()
    return value


def parse_scalar(text: str) -> Scalar:
    """Parse an exact constant like '3/2' or '1 - sqrt2'."""
    value = parse_expr(text, variables=())
    if not isinstance(value, RationalExpr) or not value.is_constant():
        raise ParseError(f"expected an exact constant, got {text!r}")
    return value.constant_value()


def parse_fraction(text: str) -> Fraction:
    """Parse an exact rational 'p/q'; rejects sqrt2 parts."""
    value = parse_scalar(text)
    if value.b:
        raise ParseError(f"expected a plain rational, got {text!r}")
    return value.a
