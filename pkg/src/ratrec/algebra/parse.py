"""Recursive-descent parser for rational expressions.

Grammar (whitespace insignificant)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" INTEGER)*
    atom   := INTEGER | IDENT | "(" expr ")"
"""
from __future__ import annotations

import re
from typing import List, Sequence, Tuple

from ..errors import ParseError, ZeroDenominator
from .fields import Field, QQ
from .polynomial import PolyRing
from .rational import RationalFunction

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def tokenize(text: str) -> List[Tuple[str, str, int]]:
    """List of (kind, value, pos) with kind in {int, ident, op, end}."""
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group(1) is not None:
            out.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            out.append(("ident", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", m.start(3))
            out.append(("op", ch, m.start(3)))
        else:
            break
        pos = m.end()
    out.append(("end", "", n))
    return out


def identifiers(text: str) -> List[str]:
    """Identifiers in order of first appearance."""
    seen = []
    for kind, value, _ in tokenize(text):
        if kind == "ident" and value not in seen:
            seen.append(value)
    return seen


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.toks = tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value):
        kind, v, pos = self.take()
        if v != value or kind != "op":
            raise ParseError(f"expected {value!r}, found {v or 'end of input'!r}", pos)

    def parse(self) -> RationalFunction:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        result = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {v!r}", pos)
        return result

    def expr(self):
        acc = self.term()
        while True:
            kind, v, _ = self.peek()
            if kind == "op" and v in "+-":
                self.take()
                rhs = self.term()
                acc = acc + rhs if v == "+" else acc - rhs
            else:
                return acc

    def term(self):
        acc = self.unary()
        while True:
            kind, v, pos = self.peek()
            if kind == "op" and v in "*/":
                self.take()
                rhs = self.unary()
                if v == "*":
                    acc = acc * rhs
                else:
                    if rhs.is_zero():
                        raise ParseError("division by the zero polynomial", pos)
                    acc = acc / rhs
            else:
                return acc

    def unary(self):
        kind, v, _ = self.peek()
        if kind == "op" and v == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        while True:
            kind, v, pos = self.peek()
            if not (kind == "op" and v == "^"):
                return base
            self.take()
            kind, v, pos = self.take()
            if kind != "int":
                raise ParseError("exponent must be a nonnegative integer literal", pos)
            base = base ** int(v)

    def atom(self):
        kind, v, pos = self.take()
        if kind == "int":
            try:
                return RationalFunction.const(self.ring, int(v))
            except ZeroDivisionError:
                raise ParseError("literal is not invertible in this field", pos)
        if kind == "ident":
            try:
                idx = self.ring.index(v)
            except ValueError:
                raise ParseError(f"unknown identifier {v!r}", pos) from None
            return RationalFunction.gen(self.ring, idx)
        if kind == "op" and v == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {v or 'end of input'!r}", pos)


def parse_expr(text: str, variables: Sequence[str] | PolyRing, field: Field = QQ) -> RationalFunction:
    """Parse ``text`` into a reduced rational function over ``variables``."""
    ring = variables if isinstance(variables, PolyRing) else PolyRing(field, list(variables))
    try:
        return _Parser(text, ring).parse()
    except ZeroDenominator as exc:
        raise ParseError(f"division by zero: {exc}") from exc


def parse_poly(text: str, variables, field: Field = QQ):
    f = parse_expr(text, variables, field)
    if not f.is_polynomial():
        raise ParseError(f"{text!r} is not a polynomial")
    return f.num
