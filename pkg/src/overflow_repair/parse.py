"""Parser for the textual expression grammar.

::

    expr   := ['-'] item (('+' | '-') item)*  |  '0'
    item   := [int '*'] ident  |  '(' expr ')'
    bool   := expr ('==' | '!=' | '<' | '>' | '<=' | '>=') expr

Whitespace is insignificant; identifiers match ``[A-Za-z_][A-Za-z0-9_.]*``.
Parentheses are only accepted where a grouped expression is expected.
Repeated names are numbered left to right across the whole input.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from .core import BoolExpr, GroupedExpr, LinearExpr, VarId
from .errors import ParseError
from .intervals import Interval

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_.]*)|(?P<op><=|>=|==|!=|[-+*()<>=\[\],]))"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    column: int


def tokenize(text: str, line: int = 1, column: int = 1) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mo = _TOKEN.match(text, pos)
        if mo is None:
            bad = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + bad]!r}", line, column + pos + bad)
        kind = mo.lastgroup
        out.append(Token(kind, mo.group(kind), column + mo.start(kind)))
        pos = mo.end()
    out.append(Token("eof", "", column + len(text)))
    return out


class _Parser:
    def __init__(self, text: str, line: int = 1, column: int = 1):
        self.toks = tokenize(text, line, column)
        self.i = 0
        self.line = line
        self.seen: Counter[str] = Counter()

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.line, self.tok.column)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            raise self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")

    def done(self) -> None:
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")

    def var(self, name: str) -> VarId:
        v = VarId(name, self.seen[name])
        self.seen[name] += 1
        return v

    def term(self, sign: int) -> tuple[int, VarId]:
        coef = 1
        if self.tok.kind == "num":
            coef = int(self.tok.text)
            self.i += 1
            if self.tok.kind == "ident":
                raise self.error("expected '*' between coefficient and variable")
            self.expect("*")
        if self.tok.kind != "ident":
            raise self.error(f"expected a variable, found {self.tok.text or 'end of input'!r}")
        name = self.tok.text
        self.i += 1
        return sign * coef, self.var(name)

    def zero(self) -> bool:
        if self.tok.kind == "num" and self.tok.text == "0":
            nxt = self.toks[self.i + 1]
            if not (nxt.kind == "op" and nxt.text == "*"):
                self.i += 1
                return True
        return False

    def linear(self) -> LinearExpr:
        if self.zero():
            return LinearExpr()
        sign = -1 if self.accept("-") else 1
        terms = [self.term(sign)]
        while True:
            if self.accept("+"):
                terms.append(self.term(1))
            elif self.accept("-"):
                terms.append(self.term(-1))
            else:
                return LinearExpr(tuple(terms))

    def grouped(self) -> GroupedExpr:
        if self.zero():
            return GroupedExpr()
        groups = []
        sign = -1 if self.accept("-") else 1
        while True:
            if self.accept("("):
                if sign < 0:
                    raise self.error("a parenthesized group cannot be subtracted")
                inner = self.linear()
                self.expect(")")
                groups.append(tuple(self._units(inner)))
            else:
                groups.append(tuple(self._units(LinearExpr((self.term(sign),)))))
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                return GroupedExpr(tuple(groups))

    def _units(self, e: LinearExpr):
        for c, v in e.terms:
            if c not in (1, -1):
                raise self.error("grouped expressions only allow unit coefficients")
            yield c, v

    def relation(self) -> BoolExpr:
        lhs = self.linear()
        if self.tok.kind != "op" or self.tok.text not in ("==", "!=", "<", ">", "<=", ">=", "="):
            raise self.error("expected a relational operator")
        op = "==" if self.tok.text == "=" else self.tok.text
        self.i += 1
        rhs = self.linear()
        return BoolExpr(lhs, op, rhs)

    def interval(self) -> Interval:
        self.expect("[")
        lo = self.signed_int()
        self.expect(",")
        hi = self.signed_int()
        self.expect("]")
        if lo > hi:
            raise self.error(f"empty interval [{lo}, {hi}]")
        return Interval(lo, hi)

    def signed_int(self) -> int:
        neg = self.accept("-")
        if self.tok.kind != "num":
            raise self.error("expected an integer")
        v = int(self.tok.text)
        self.i += 1
        return -v if neg else v


def parse_linear(text: str, line: int = 1, column: int = 1) -> LinearExpr:
    p = _Parser(text, line, column)
    e = p.linear()
    p.done()
    return e


def parse_grouped(text: str, line: int = 1, column: int = 1) -> GroupedExpr:
    p = _Parser(text, line, column)
    e = p.grouped()
    p.done()
    return e


def parse_bool(text: str, line: int = 1, column: int = 1) -> BoolExpr:
    p = _Parser(text, line, column)
    b = p.relation()
    p.done()
    return b


def parse_interval(text: str, line: int = 1, column: int = 1) -> Interval:
    p = _Parser(text, line, column)
    b = p.interval()
    p.done()
    return b


def parse_constraint(text: str, line: int = 1, column: int = 1) -> tuple[LinearExpr, Interval]:
    """``<expr> in [lo, hi]``"""
    mo = re.search(r"\bin\b", text)
    if mo is None:
        raise ParseError("expected 'in [lo, hi]'", line, column + len(text))
    e = parse_linear(text[: mo.start()], line, column)
    b = parse_interval(text[mo.end():], line, column + mo.end())
    return e, b
