"""Expression AST, machine integer types and Z-level equivalence.

Expressions are immutable.  Coefficients are Python ints and are never bounded
by a machine type; only evaluation is.  Term order is significant because
machine evaluation is strictly left to right.
"""

from __future__ import annotations

import operator
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence, Union

BITS = (4, 8, 16, 32, 64)


@dataclass(frozen=True)
class MachineType:
    bits: int
    signed: bool = True

    def __post_init__(self) -> None:
        if self.bits not in BITS:
            raise ValueError(f"unsupported bit width {self.bits}; expected one of {BITS}")

    @property
    def min(self) -> int:
        return -(1 << (self.bits - 1)) if self.signed else 0

    @property
    def max(self) -> int:
        return (1 << (self.bits - 1)) - 1 if self.signed else (1 << self.bits) - 1

    def represents(self, value: int) -> bool:
        return self.min <= value <= self.max

    @classmethod
    def parse(cls, text: str) -> "MachineType":
        """Parse ``int32`` / ``uint8`` style names."""
        t = text.strip().lower()
        signed = not t.startswith("u")
        digits = t[4:] if not signed else t[3:]
        if not (t.startswith("int") or t.startswith("uint")) or not digits.isdigit():
            raise ValueError(f"bad machine type {text!r}")
        return cls(int(digits), signed)

    def __str__(self) -> str:
        return f"{'' if self.signed else 'u'}int{self.bits}"


M4 = MachineType(4)
M8 = MachineType(8)
M16 = MachineType(16)
M32 = MachineType(32)
M64 = MachineType(64)


@dataclass(frozen=True, order=True)
class VarId:
    """A variable occurrence.  ``occurrence`` distinguishes renamed copies."""

    name: str
    occurrence: int = 0

    def __str__(self) -> str:
        return self.name


def _render_terms(terms: Sequence[tuple[int, VarId]]) -> str:
    if not terms:
        return "0"
    parts = []
    for i, (c, v) in enumerate(terms):
        mag = abs(c)
        body = v.name if mag == 1 else f"{mag}*{v.name}"
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


@dataclass(frozen=True)
class LinearExpr:
    terms: tuple[tuple[int, VarId], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple((int(c), v) for c, v in self.terms))

    @classmethod
    def of(cls, *items: tuple[int, str] | str) -> "LinearExpr":
        """Build from ``"x"`` or ``(coef, "x")`` items, numbering repeated names."""
        seen: Counter[str] = Counter()
        terms = []
        for it in items:
            c, name = (1, it) if isinstance(it, str) else it
            terms.append((c, VarId(name, seen[name])))
            seen[name] += 1
        return cls(tuple(terms))

    def __iter__(self) -> Iterator[tuple[int, VarId]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __sub__(self, other: "LinearExpr") -> "LinearExpr":
        return LinearExpr(self.terms + tuple((-c, v) for c, v in other.terms))

    def names(self) -> set[str]:
        return {v.name for _, v in self.terms}

    def __str__(self) -> str:
        return _render_terms(self.terms)


RELOPS: dict[str, Callable[[int, int], bool]] = {
    "==": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    ">": operator.gt,
    "<=": operator.le,
    ">=": operator.ge,
}


@dataclass(frozen=True)
class BoolExpr:
    lhs: LinearExpr
    op: str
    rhs: LinearExpr

    def __post_init__(self) -> None:
        if self.op not in RELOPS:
            raise ValueError(f"unknown relational operator {self.op!r}")

    def holds(self, left: int, right: int) -> bool:
        return RELOPS[self.op](left, right)

    def names(self) -> set[str]:
        return self.lhs.names() | self.rhs.names()

    def __str__(self) -> str:
        return f"{self.lhs} {self.op} {self.rhs}"


@dataclass(frozen=True)
class GroupedExpr:
    """A sum of parenthesized groups of ±1-signed occurrences.

    Groups are evaluated left to right; a group of two or more occurrences is
    computed on its own and then added to the running sum as a unit.
    """

    groups: tuple[tuple[tuple[int, VarId], ...], ...] = field(default=())

    def __post_init__(self) -> None:
        groups = tuple(tuple((int(s), v) for s, v in g) for g in self.groups)
        for g in groups:
            if not g:
                raise ValueError("empty group")
            if any(s not in (1, -1) for s, _ in g):
                raise ValueError("group members must carry sign +1 or -1")
        object.__setattr__(self, "groups", groups)

    def flatten(self) -> LinearExpr:
        return LinearExpr(tuple(t for g in self.groups for t in g))

    def names(self) -> set[str]:
        return {v.name for g in self.groups for _, v in g}

    def __str__(self) -> str:
        if not self.groups:
            return "0"
        out = []
        for i, g in enumerate(self.groups):
            if len(g) == 1:
                text = _render_terms(g)
                if i == 0:
                    out.append(text)
                elif text.startswith("-"):
                    out.append(" - " + text[1:])
                else:
                    out.append(" + " + text)
            else:
                out.append(("" if i == 0 else " + ") + "(" + _render_terms(g) + ")")
        return "".join(out)


AnyExpr = Union[LinearExpr, GroupedExpr, BoolExpr]


def as_linear(e: LinearExpr | GroupedExpr) -> LinearExpr:
    return e.flatten() if isinstance(e, GroupedExpr) else e


def canonicalize(e: LinearExpr | GroupedExpr | Iterable[tuple[int, VarId]]) -> dict[str, int]:
    """Total coefficient per variable name, zero entries dropped."""
    if isinstance(e, GroupedExpr):
        e = e.flatten()
    total: dict[str, int] = {}
    for c, v in e:
        total[v.name] = total.get(v.name, 0) + c
    return {k: c for k, c in sorted(total.items()) if c != 0}


def z_equivalent(a: LinearExpr | GroupedExpr, b: LinearExpr | GroupedExpr) -> bool:
    return canonicalize(a) == canonicalize(b)


def z_equivalent_rel(a: BoolExpr, b: BoolExpr) -> bool:
    return a.op == b.op and canonicalize(a.lhs - a.rhs) == canonicalize(b.lhs - b.rhs)
