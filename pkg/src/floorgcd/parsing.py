"""Recursive-descent parser for constant and polynomial text.

Constants::

    const    := term (('+'|'-') term)*
    term     := factor (('*'|'/') factor)*
    factor   := 'sqrt(' uint ')' | 'pi' | 'e' | 'liouville(' uint ')'
              | ['-'] uint ['/' uint] | '(' const ')'

Polynomials use the same grammar with the extra factors ``x`` and ``x^j``.
Unary minus is accepted in front of any factor.  Division is only allowed by
rational-valued factors.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .constants import (
    ComputableReal, ConstantSyntaxError, EulerE, Liouville, Pi, Rational, Sqrt,
    add, mul, neg, scale, sub,
)

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]+)|(\*\*|[-+*/^()]))")
_MINUS = str.maketrans({"−": "-", "·": "*", "×": "*"})

Poly = dict  # power -> ComputableReal


def _tokenize(text: str):
    text = text.translate(_MINUS)
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            j = len(text) - len(text[pos:].lstrip())
            raise ConstantSyntaxError(f"unexpected character {text[j]!r}", j, text)
        start = m.start(m.lastindex)
        tok = m.group(m.lastindex)
        kind = ("int", "name", "op")[m.lastindex - 1]
        if tok == "**":
            tok = "^"
        out.append((kind, tok, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, allow_x: bool):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_x = allow_x

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ConstantSyntaxError(msg, tok[2], self.text)

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            found = tok[1] or "end of input"
            raise self.error(f"expected {value!r}, found {found!r}", tok)
        return tok

    def uint(self):
        tok = self.take()
        if tok[0] != "int":
            raise self.error("expected an unsigned integer", tok)
        return int(tok[1]), tok

    def parse(self) -> Poly:
        result = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return result

    def expr(self) -> Poly:
        acc = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            acc = _combine(acc, rhs, add if op == "+" else sub)
        return acc

    def term(self) -> Poly:
        acc = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            tok = self.peek()
            rhs = self.unary()
            if op == "*":
                acc = _product(acc, rhs)
                continue
            r = _rational_value(rhs)
            if r is None:
                raise self.error("division is only allowed by rational values", tok)
            if r == 0:
                raise self.error("zero denominator", tok)
            acc = {j: scale(c, 1 / r) for j, c in acc.items()}
        return acc

    def unary(self) -> Poly:
        if self.peek()[1] == "-":
            self.take()
            return {j: neg(c) for j, c in self.unary().items()}
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.factor()

    def factor(self) -> Poly:
        tok = self.take()
        kind, val, _ = tok
        if kind == "int":
            return {0: Rational(int(val))}
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "name":
            name = val.lower()
            if name == "pi":
                return {0: Pi()}
            if name == "e":
                return {0: EulerE()}
            if name == "sqrt":
                self.expect("(")
                k, ktok = self.uint()
                self.expect(")")
                if k == 0:
                    raise self.error("sqrt argument must be a positive integer", ktok)
                return {0: _fold_sqrt(k)}
            if name == "liouville":
                self.expect("(")
                b, btok = self.uint()
                self.expect(")")
                if b < 2:
                    raise self.error("liouville base must be at least 2", btok)
                return {0: Liouville(b)}
            if name == "x":
                if not self.allow_x:
                    raise self.error("variable 'x' is not allowed in a constant", tok)
                power = 1
                if self.peek()[1] == "^":
                    self.take()
                    power, _ = self.uint()
                return {power: Rational(1)}
            raise self.error(f"unknown name {val!r}", tok)
        raise self.error(f"unexpected token {val or 'end of input'!r}", tok)


def _fold_sqrt(k: int) -> ComputableReal:
    node = Sqrt(k)
    r = node.rational()
    return Rational.of(r) if r is not None else node


def _rational_value(p: Poly) -> Fraction | None:
    if any(j != 0 and c.rational() != 0 for j, c in p.items()):
        return None
    c = p.get(0)
    return Fraction(0) if c is None else c.rational()


def _combine(a: Poly, b: Poly, op) -> Poly:
    out = dict(a)
    for j, c in b.items():
        out[j] = op(out.get(j, Rational(0)), c)
    return out


def _product(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for i, ca in a.items():
        for j, cb in b.items():
            out[i + j] = add(out.get(i + j, Rational(0)), mul(ca, cb))
    return out


def parse_constant(text: str) -> ComputableReal:
    """Parse a constant expression such as ``"pi/3 + 1/7"``."""
    poly = _Parser(text, allow_x=False).parse()
    return poly.get(0, Rational(0))


def parse_polynomial_terms(text: str) -> Poly:
    """Parse polynomial text into a ``{power: coefficient}`` mapping."""
    return _Parser(text, allow_x=True).parse()
