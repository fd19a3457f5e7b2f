"""A small infix reader for polynomials such as ``X^2*Y - 3`` or ``(1/2)x + 1``.

Only used for command-line flags; files always carry the JSON encoding.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .poly import MultiPoly, PolyRing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class ParseError(ValueError):
    pass


def _tokens(text: str):
    text = text.replace("−", "-").replace("**", "^")
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, ident, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif ident is not None:
            out.append(("id", ident))
        elif op is not None:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r} in {text!r}")
            out.append(("op", op))
        pos = m.end()
    return out


def identifiers(text: str) -> list[str]:
    """Variable names in order of first appearance."""
    seen: list[str] = []
    for kind, v in _tokens(text):
        if kind == "id" and v not in seen:
            seen.append(v)
    return seen


class _Parser:
    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, v = self.take()
        if kind != "op" or v != op:
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def expr(self) -> MultiPoly:
        acc = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> MultiPoly:
        acc = self.unary()
        while True:
            kind, v = self.peek()
            if kind == "op" and v == "*":
                self.take()
                acc = acc * self.unary()
            elif kind == "op" and v == "/":
                self.take()
                d = self.unary()
                if not d.is_constant() or d.is_zero():
                    raise ParseError(f"division by non-constant in {self.text!r}")
                acc = acc.scale(self.ring.field.inv(d.constant_value()))
            elif kind in ("num", "id") or (kind == "op" and v == "("):
                acc = acc * self.unary()
            else:
                return acc

    def unary(self) -> MultiPoly:
        kind, v = self.peek()
        if kind == "op" and v in "+-":
            self.take()
            inner = self.unary()
            return -inner if v == "-" else inner
        return self.power()

    def power(self) -> MultiPoly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, v = self.take()
            if kind != "num":
                raise ParseError(f"integer exponent expected in {self.text!r}")
            return base ** (sign * v)
        return base

    def atom(self) -> MultiPoly:
        kind, v = self.take()
        if kind == "num":
            return self.ring.const(Fraction(v))
        if kind == "id":
            if v not in self.ring.names:
                raise ParseError(f"unknown variable {v!r} in {self.text!r}; ring has {list(self.ring.names)}")
            return self.ring.gen(v)
        if kind == "op" and v == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected end or token in {self.text!r}")


def parse_poly(text: str, ring: PolyRing) -> MultiPoly:
    p = _Parser(ring, text)
    result = p.expr()
    if p.i != len(p.toks):
        raise ParseError(f"trailing input in {text!r}")
    return result
