"""Line-oriented problem files.

::

    # comment
    machine int32
    var x in [0, 536870912]
    rel x + y in [-4, 4]
    template 2*x + 3*y in [-10, 10]
    query q1 sum: 2*x + y
    query q2 rel: x + y <= z
    repair q1: y + x + x

``repair`` lines carry a previously produced rewrite for ``verify``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .core import M32, BoolExpr, GroupedExpr, LinearExpr, MachineType
from .errors import InconsistentEnvironment, ParseError
from .intervals import AbstractEnv, Interval, Template
from .parse import parse_bool, parse_constraint, parse_grouped, parse_interval, parse_linear

QUERY_KINDS = ("sum", "rel")

_MACHINE = re.compile(r"machine\s+(\S+)\s*$")
_VAR = re.compile(r"var\s+([A-Za-z_][A-Za-z0-9_.]*)\s+in\s+(.*)$")
_QUERY = re.compile(r"query\s+(\S+)\s+(\w+)\s*:\s*(.*)$")
_REPAIR = re.compile(r"repair\s+(\S+)\s*:\s*(.*)$")


@dataclass(frozen=True)
class Query:
    id: str
    kind: str  # "sum" | "rel"
    text: str
    expr: LinearExpr | BoolExpr
    line: int = 0


@dataclass(frozen=True)
class ProblemFile:
    machine: MachineType
    env: AbstractEnv
    queries: tuple[Query, ...]
    repairs: Mapping[str, str] = field(default_factory=dict)

    def query(self, qid: str) -> Query:
        for q in self.queries:
            if q.id == qid:
                return q
        raise KeyError(qid)


def parse_repair_text(text: str, kind: str, line: int = 1, column: int = 1) -> LinearExpr | GroupedExpr | BoolExpr:
    """Parse a rewrite as printed in reports: relations, grouped sums or plain sums."""
    if kind == "rel":
        return parse_bool(text, line, column)
    if "(" in text:
        return parse_grouped(text, line, column)
    return parse_linear(text, line, column)


def _pair(e: LinearExpr, b: Interval, line: int, col: int):
    terms = e.terms
    if len(terms) != 2 or any(abs(c) != 1 for c, _ in terms) or terms[0][1].name == terms[1][1].name:
        raise ParseError("a rel line needs the form 'x + y' or 'x - y' over two distinct variables", line, col)
    (c1, v1), (c2, v2) = terms
    if c1 < 0:  # -x - y in [a, b]  <=>  x + y in [-b, -a]
        c1, c2, b = -c1, -c2, -b
    return (v1.name, v2.name, c2), b


def parse_problem(text: str) -> ProblemFile:
    machine = M32
    unary: dict[str, Interval] = {}
    pairs: dict = {}
    templates: list[Template] = []
    queries: list[Query] = []
    repairs: dict[str, str] = {}
    declared_at: dict[str, int] = {}
    repair_at: dict[str, int] = {}
    last_line = 0

    for lineno, raw in enumerate(text.split("\n"), start=1):
        body = raw.split("#", 1)[0].rstrip()
        stripped = body.lstrip()
        if not stripped:
            continue
        last_line = lineno
        col = len(body) - len(stripped) + 1
        keyword = stripped.split(None, 1)[0]
        rest_col = col + len(keyword) + (len(stripped[len(keyword):]) - len(stripped[len(keyword):].lstrip()))
        rest = stripped[len(keyword):].strip()

        if keyword == "machine":
            mo = _MACHINE.match(stripped)
            try:
                machine = MachineType.parse(mo.group(1) if mo else "")
            except ValueError as exc:
                raise ParseError(str(exc), lineno, rest_col) from None
        elif keyword == "var":
            mo = _VAR.match(stripped)
            if mo is None:
                raise ParseError("expected 'var <name> in [lo, hi]'", lineno, rest_col)
            name = mo.group(1)
            if name in unary:
                raise ParseError(f"variable {name!r} already declared on line {declared_at[name]}", lineno, rest_col)
            unary[name] = parse_interval(mo.group(2), lineno, col + mo.start(2))
            declared_at[name] = lineno
        elif keyword == "rel":
            e, b = parse_constraint(rest, lineno, rest_col)
            key, b = _pair(e, b, lineno, rest_col)
            pairs[key] = b
        elif keyword == "template":
            e, b = parse_constraint(rest, lineno, rest_col)
            try:
                templates.append(Template(tuple((v.name, c) for c, v in e.terms), b))
            except InconsistentEnvironment as exc:
                raise ParseError(str(exc), lineno, rest_col) from None
        elif keyword == "query":
            mo = _QUERY.match(stripped)
            if mo is None:
                raise ParseError("expected 'query <id> sum|rel: <expression>'", lineno, rest_col)
            qid, kind, expr_text = mo.group(1), mo.group(2), mo.group(3)
            if kind not in QUERY_KINDS:
                raise ParseError(f"unknown query kind {kind!r} (expected sum or rel)", lineno, col + mo.start(2))
            if any(q.id == qid for q in queries):
                raise ParseError(f"duplicate query id {qid!r}", lineno, col + mo.start(1))
            ecol = col + mo.start(3)
            expr = parse_linear(expr_text, lineno, ecol) if kind == "sum" else parse_bool(expr_text, lineno, ecol)
            queries.append(Query(qid, kind, expr_text.strip(), expr, lineno))
        elif keyword == "repair":
            mo = _REPAIR.match(stripped)
            if mo is None:
                raise ParseError("expected 'repair <id>: <expression>'", lineno, rest_col)
            repairs[mo.group(1)] = mo.group(2).strip()
            repair_at[mo.group(1)] = lineno
        else:
            raise ParseError(f"unknown directive {keyword!r}", lineno, col)

    try:
        env = AbstractEnv(unary, pairs, tuple(templates))
    except InconsistentEnvironment as exc:
        raise ParseError(str(exc), last_line, 1) from None
    for q in queries:
        missing = sorted(q.expr.names() - set(unary))
        if missing:
            raise ParseError(f"query {q.id} uses undeclared variable {missing[0]!r}", q.line, 1)
    for qid in repairs:
        if not any(q.id == qid for q in queries):
            raise ParseError(f"repair for unknown query {qid!r}", repair_at[qid], 1)
    return ProblemFile(machine, env, tuple(queries), repairs)


def load_problem(path: str | Path) -> ProblemFile:
    return parse_problem(Path(path).read_text(encoding="utf-8"))


def format_problem(p: ProblemFile) -> str:
    lines = [f"machine {p.machine}"]
    lines += [f"var {n} in {b}" for n, b in p.env.unary.items()]
    lines += [f"rel {x} {'+' if s == 1 else '-'} {y} in {b}" for (x, y, s), b in p.env.pairs.items()]
    lines += [f"template {t}" for t in p.env.templates]
    lines += [f"query {q.id} {q.kind}: {q.text}" for q in p.queries]
    lines += [f"repair {qid}: {text}" for qid, text in p.repairs.items()]
    return "\n".join(lines) + "\n"
