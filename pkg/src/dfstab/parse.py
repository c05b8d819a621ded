"""Recursive-descent parser for operators and rational functions.

Grammar (whitespace is ignored):

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | factor
    factor := base ('^' digits)?
    base   := 'x' | 'D' | digits | '(' expr ')'

Products are evaluated left to right in the Ore ring, so "D*x" is x*D + 1.
The right operand of '/' must be free of D; A/g means A*(1/g).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactalg import Poly
from .ore import OreOp
from .ratfun import RatFun

_SINGLE = set("xD+-*/^()")


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position


@dataclass(frozen=True)
class Token:
    kind: str  # one of the single characters, "int" or "end"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in _SINGLE:
            out.append(Token(ch, ch, i))
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(Token("int", text[i:j], i))
            i = j
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    out.append(Token("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def take(self, kind: str) -> Token:
        t = self.tok
        if t.kind != kind:
            what = "end of input" if t.kind == "end" else repr(t.text)
            raise ParseError(f"expected {kind!r}, found {what}", t.pos)
        self.i += 1
        return t

    def parse(self) -> OreOp:
        if self.tok.kind == "end":
            raise ParseError("empty expression", self.tok.pos)
        val = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return val

    def expr(self) -> OreOp:
        val = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.take(self.tok.kind).kind
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self) -> OreOp:
        val = self.unary()
        while self.tok.kind in ("*", "/"):
            op = self.take(self.tok.kind)
            start = self.tok.pos
            rhs = self.unary()
            if op.kind == "*":
                val = val * rhs
                continue
            if rhs.order > 0:
                raise ParseError("divisor must not contain D", start)
            if rhs.is_zero():
                raise ParseError("division by zero", start)
            val = val * OreOp.scalar(rhs.coeff(0).inverse())
        return val

    def unary(self) -> OreOp:
        if self.tok.kind == "-":
            self.take("-")
            return -self.unary()
        return self.factor()

    def factor(self) -> OreOp:
        val = self.base()
        if self.tok.kind == "^":
            self.take("^")
            if self.tok.kind == "-":
                raise ParseError("negative exponent", self.tok.pos)
            val = val ** int(self.take("int").text)
        return val

    def base(self) -> OreOp:
        t = self.tok
        if t.kind == "x":
            self.i += 1
            return OreOp.scalar(Poly.x())
        if t.kind == "D":
            self.i += 1
            return OreOp.D()
        if t.kind == "int":
            self.i += 1
            return OreOp.scalar(int(t.text))
        if t.kind == "(":
            self.i += 1
            val = self.expr()
            self.take(")")
            return val
        what = "end of input" if t.kind == "end" else repr(t.text)
        raise ParseError(f"unexpected {what}", t.pos)


def parse_operator(text: str) -> OreOp:
    return _Parser(text).parse()


def parse_ratfun(text: str) -> RatFun:
    """Parse an expression that must not involve D."""
    op = parse_operator(text)
    if op.order > 0:
        raise ParseError("expected a rational function without D", 0)
    return op.coeff(0)


def parse_poly(text: str) -> Poly:
    f = parse_ratfun(text)
    if not f.is_polynomial():
        raise ParseError("expected a polynomial in x", 0)
    return f.num


def parse_poly_in_D(text: str) -> Poly:
    """Parse a constant-coefficient operator p(D) and return p."""
    op = parse_operator(text)
    coeffs: list[Fraction] = []
    for c in op.coeffs:
        if not c.is_constant():
            raise ParseError("expected a polynomial in D with constant coefficients", 0)
        coeffs.append(c.constant_value())
    return Poly(coeffs)
