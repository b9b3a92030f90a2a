"""Checked machine evaluation, exact Z evaluation and the interval checker.

Evaluation order is left to right.  For a term ``c*x``:

* the first term evaluates ``c*x`` on its own (for ``c = -1`` that is a
  negation, which overflows on the minimum value);
* a later term with ``|c| = 1`` is a single addition or subtraction;
* a later term with ``|c| >= 2`` first computes ``|c|*x`` and then adds or
  subtracts it.

Every operation is checked.  ``certificate`` mirrors exactly the same steps
on intervals, which is what makes the interval check sound and, when every
variable occurs once, exact.
"""

from __future__ import annotations

from typing import Mapping

from .core import GroupedExpr, LinearExpr, MachineType
from .errors import ArithmeticOverflow, UnboundVariable
from .intervals import ZERO, AbstractEnv, Interval

ConcreteState = Mapping[str, int]


def _value(state: ConcreteState, name: str) -> int:
    try:
        return state[name]
    except KeyError:
        raise UnboundVariable(name) from None


def _checked(v: int, m: MachineType, pos: int) -> int:
    if not m.represents(v):
        raise ArithmeticOverflow(pos, v)
    return v


def _eval_terms(terms, state: ConcreteState, m: MachineType, pos0: int = 0) -> int:
    acc = 0
    for i, (c, v) in enumerate(terms):
        x = _value(state, v.name)
        pos = pos0 + i
        if c == 0:
            continue
        if i == 0:
            acc = _checked(c * x, m, pos)
            continue
        mag = abs(c)
        operand = x if mag == 1 else _checked(mag * x, m, pos)
        acc = _checked(acc + operand if c > 0 else acc - operand, m, pos)
    return acc


def eval_concrete(e: LinearExpr | GroupedExpr, state: ConcreteState, m: MachineType) -> int:
    """Evaluate with machine checks; raise ``ArithmeticOverflow`` on the first failure."""
    if isinstance(e, LinearExpr):
        return _eval_terms(e.terms, state, m)
    acc = 0
    for i, g in enumerate(e.groups):
        if len(g) == 1:
            (s, v), = g
            if i == 0:
                acc = _checked(s * _value(state, v.name), m, i)
            else:
                x = _value(state, v.name)
                acc = _checked(acc + x if s > 0 else acc - x, m, i)
        else:
            gv = _eval_terms(g, state, m, pos0=i)
            acc = gv if i == 0 else _checked(acc + gv, m, i)
    return acc


def overflows(e: LinearExpr | GroupedExpr, state: ConcreteState, m: MachineType) -> bool:
    try:
        eval_concrete(e, state, m)
    except ArithmeticOverflow:
        return True
    return False


def eval_z(e: LinearExpr | GroupedExpr, state: ConcreteState) -> int:
    if isinstance(e, GroupedExpr):
        e = e.flatten()
    return sum(c * _value(state, v.name) for c, v in e.terms)


def eval_interval(e: LinearExpr, env: AbstractEnv) -> Interval:
    """Unbounded interval evaluation; exact when each name occurs once."""
    lo = hi = 0
    for c, v in e.terms:
        b = env.bound(v.name).scale(c)
        lo += b.lo
        hi += b.hi
    return Interval(lo, hi)


def _term_certificate(terms, env: AbstractEnv, m: MachineType, out: list[Interval]) -> Interval | None:
    acc = ZERO
    for i, (c, v) in enumerate(terms):
        x = env.bound(v.name)
        if c == 0:
            out.append(acc)
            continue
        if i == 0:
            acc = x.scale(c)
        else:
            mag = abs(c)
            operand = x if mag == 1 else x.scale(mag)
            if mag != 1 and not operand.within(m):
                return None
            acc = acc + operand if c > 0 else acc + (-operand)
        if not acc.within(m):
            return None
        out.append(acc)
    return acc


def group_weight(group, env: AbstractEnv, m: MachineType) -> Interval | None:
    """Interval of a parenthesized group, or ``None`` if computing it may overflow.

    A pair/template fact bounds the group total; without one the total is the
    unary sum.  Internal prefixes are always checked with unary bounds.
    """
    items = [(s, v.name) for s, v in group]
    fact = env.group_bound(items) if len(group) > 1 else None
    prefixes: list[Interval] = []
    inner = group[:-1] if fact is not None else group
    if inner and _term_certificate(inner, env, m, prefixes) is None:
        return None
    if fact is None:
        return prefixes[-1]
    return fact if fact.within(m) else None


def certificate(e: LinearExpr | GroupedExpr, env: AbstractEnv, m: MachineType) -> list[Interval] | None:
    """Prefix partial-sum intervals if every step stays within ``m``, else ``None``."""
    out: list[Interval] = []
    if isinstance(e, LinearExpr):
        return out if _term_certificate(e.terms, env, m, out) is not None else None
    acc = ZERO
    for i, g in enumerate(e.groups):
        if len(g) == 1:
            (s, v), = g
            w = env.bound(v.name) if s > 0 else -env.bound(v.name)
        else:
            w = group_weight(g, env, m)
            if w is None:
                return None
        acc = w if i == 0 else acc + w
        if not acc.within(m):
            return None
        out.append(acc)
    return out


def check_not_overflow(e: LinearExpr | GroupedExpr, env: AbstractEnv, m: MachineType) -> bool:
    return certificate(e, env, m) is not None
