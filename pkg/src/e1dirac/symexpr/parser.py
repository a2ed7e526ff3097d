"""Recursive-descent parser for the scalar expression surface syntax.

Grammar (whitespace is ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | factor
    factor := base ('^' '-'? integer)?
    base   := number | ident | '(' expr ')' | func '(' expr ')'
    func   := exp | log | sin | cos

Integer literals become exact rationals, literals with a decimal point or an
exponent become binary doubles.  Columns in error messages are 1-based.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Optional

from ..errors import ExprSyntaxError, UnknownIdentifier
from .core import FUNCTIONS, Expr, add, const, func, mul, power, var

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<id>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ExprSyntaxError(f"unexpected character {text[col - 1]!r}", col, text)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    out.append(("end", "", n + 1))
    return out


class _Parser:
    def __init__(self, text: str, allowed: Optional[frozenset]):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.allowed = allowed

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ExprSyntaxError(msg, tok[2], self.text)

    def expect(self, value):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != value:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise self.error(f"expected '{value}', found {found}")
        return self.take()

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        e = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return e

    def expr(self) -> Expr:
        parts = [self.term()]
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            parts.append(t if op == "+" else mul(-1, t))
        return add(*parts)

    def term(self) -> Expr:
        e = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()
            rhs = self.unary()
            if op[1] == "*":
                e = mul(e, rhs)
            else:
                if rhs.is_zero():
                    raise self.error("division by the constant zero", op)
                e = mul(e, power(rhs, -1))
        return e

    def unary(self) -> Expr:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            inner = self.unary()
            return inner if tok[1] == "+" else mul(-1, inner)
        return self.factor()

    def factor(self) -> Expr:
        b = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                self.take()
                sign = -1
            tok = self.peek()
            if tok[0] != "num" or not tok[1].isdigit():
                raise self.error("exponent must be an integer literal")
            self.take()
            k = sign * int(tok[1])
            if k < 0 and b.is_zero():
                raise self.error("negative power of the constant zero", tok)
            b = power(b, k)
        return b

    def base(self) -> Expr:
        tok = self.take()
        kind, value, col = tok
        if kind == "num":
            if re.fullmatch(r"\d+", value):
                return const(Fraction(int(value)))
            return const(float(value))
        if kind == "id":
            if value in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return func(value, arg)
            if self.allowed is not None and value not in self.allowed:
                raise UnknownIdentifier(value, col, self.text)
            return var(value)
        if kind == "op" and value == "(":
            e = self.expr()
            self.expect(")")
            return e
        found = "end of input" if kind == "end" else repr(value)
        raise ExprSyntaxError(f"unexpected {found}", col, self.text)


def parse_expr(text: str, variables: Optional[Iterable[str]] = None) -> Expr:
    """Parse ``text``; when ``variables`` is given, other identifiers are rejected."""
    allowed = None if variables is None else frozenset(variables)
    return _Parser(text, allowed).parse()
