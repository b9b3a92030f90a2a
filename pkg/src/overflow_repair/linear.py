"""Reordering a linear sum so that no partial sum leaves the machine range.

Coefficients are expanded into unit occurrences (``3*x`` becomes ``x + x + x``,
``-x`` is recorded by negating the bound).  Occurrences whose bound excludes
zero are placed first by a greedy loop that keeps the running interval
centred; occurrences whose bound straddles zero are appended afterwards in
input order, since each of them only widens the running interval.

The greedy loop alone can get stuck on instances that do have a safe order
(e.g. [3,7], [-6,-1], [-7,-3], [2,3] at 4 bits).  When that happens an exact
memoized search over the sign-definite occurrences takes over, so
``UNREPAIRABLE`` always means that no permutation is safe.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import MutableMapping, Sequence

import numpy as np

from .core import LinearExpr, MachineType, VarId, z_equivalent
from .errors import CoefficientCapExceeded
from .intervals import AbstractEnv, Interval
from .outcome import Outcome, RepairOutcome
from .semantics import certificate

DEFAULT_COEFFICIENT_CAP = 64
DEFAULT_SEARCH_BUDGET = 200_000
_NUMPY_MIN_TERMS = 64
_NUMPY_BOUND = 1 << 40


@dataclass(frozen=True)
class UnitTerm:
    origin: VarId
    sign: int
    bound: Interval
    index: int = 0

    @property
    def name(self) -> str:
        return self.origin.name


@dataclass(frozen=True)
class Partition:
    positives: tuple[int, ...]
    negatives: tuple[int, ...]
    tops: tuple[int, ...]

    @property
    def definite(self) -> tuple[int, ...]:
        return tuple(sorted(self.positives + self.negatives))


class SearchBudgetExceeded(Exception):
    pass


def preprocess(
    e: LinearExpr,
    env: AbstractEnv,
    cap: int = DEFAULT_COEFFICIENT_CAP,
    *,
    start: int = 0,
    copies: MutableMapping[str, int] | None = None,
) -> list[UnitTerm]:
    """Expand ``e`` into ±1 unit occurrences with sign-adjusted bounds.

    Each copy gets a fresh ``VarId`` (same name, next occurrence number), so
    copies stay distinguishable.  ``copies`` lets two calls share numbering,
    as the two sides of a relation do.
    """
    copies = Counter() if copies is None else copies
    units: list[UnitTerm] = []
    for c, v in e.terms:
        b = env.bound(v.name)
        if c == 0:
            continue
        if abs(c) > cap:
            raise CoefficientCapExceeded(v.name, c, cap)
        sign = 1 if c > 0 else -1
        bound = b if sign > 0 else -b
        for _ in range(abs(c)):
            units.append(UnitTerm(VarId(v.name, copies[v.name]), sign, bound, start + len(units)))
            copies[v.name] += 1
    return units


def partition(bounds: Sequence[Interval]) -> Partition:
    pos, neg, top = [], [], []
    for i, b in enumerate(bounds):
        if b.lo > 0:
            pos.append(i)
        elif b.hi < 0:
            neg.append(i)
        else:
            top.append(i)
    return Partition(tuple(pos), tuple(neg), tuple(top))


def _greedy_python(bounds, idx, m, ops):
    remaining = list(idx)
    order = []
    slo = shi = 0
    while remaining:
        best = None
        for pos, j in enumerate(remaining):
            b = bounds[j]
            lo, hi = slo + b.lo, shi + b.hi
            if m.min <= lo and hi <= m.max:
                key = abs(lo + hi)
                if best is None or key < best[0]:
                    best = (key, pos)
        ops["ops"] += len(remaining)
        if best is None:
            return order, False
        j = remaining.pop(best[1])
        slo += bounds[j].lo
        shi += bounds[j].hi
        order.append(j)
    return order, True


def _greedy_numpy(bounds, idx, m, ops):
    lo = np.array([bounds[j].lo for j in idx], dtype=np.int64)
    hi = np.array([bounds[j].hi for j in idx], dtype=np.int64)
    mid = lo + hi
    alive = np.ones(len(idx), dtype=bool)
    big = np.int64(1 << 62)
    order = []
    slo = shi = 0
    for step in range(len(idx)):
        feasible = alive & (lo >= m.min - slo) & (hi <= m.max - shi)
        ops["ops"] += len(idx) - step
        if not feasible.any():
            return order, False
        score = np.where(feasible, np.abs(mid + (slo + shi)), big)
        k = int(np.argmin(score))
        alive[k] = False
        j = idx[k]
        slo += bounds[j].lo
        shi += bounds[j].hi
        order.append(j)
    return order, True


def _numpy_ok(bounds, idx, m) -> bool:
    return (
        len(idx) >= _NUMPY_MIN_TERMS
        and m.bits <= 32
        and all(abs(bounds[j].lo) < _NUMPY_BOUND and abs(bounds[j].hi) < _NUMPY_BOUND for j in idx)
    )


def _exact_order(bounds, idx, m, budget, ops):
    """Exhaustive search for a safe order of the sign-definite occurrences.

    Occurrences with equal bounds are interchangeable, so a state is the
    number of occurrences used from each bound class; the running interval is
    a function of that state, which makes failed states safe to memoize.
    """
    classes: dict[Interval, list[int]] = {}
    for j in idx:
        classes.setdefault(bounds[j], []).append(j)
    keys = list(classes)
    members = [classes[k] for k in keys]
    sizes = tuple(len(ms) for ms in members)
    used = [0] * len(keys)
    failed: set[tuple[int, ...]] = set()
    order: list[int] = []
    slo = shi = 0

    def candidates():
        out = []
        for c, k in enumerate(keys):
            if used[c] < sizes[c]:
                lo, hi = slo + k.lo, shi + k.hi
                if m.min <= lo and hi <= m.max:
                    out.append((abs(lo + hi), members[c][used[c]], c))
        out.sort()
        return iter(out)

    stack = [candidates()]
    chosen: list[int] = []
    visited = 0
    while True:
        if len(order) == len(idx):
            return order
        step = next(stack[-1], None)
        if step is None:
            failed.add(tuple(used))
            stack.pop()
            if not chosen:
                return None
            c = chosen.pop()
            order.pop()
            used[c] -= 1
            slo -= keys[c].lo
            shi -= keys[c].hi
            continue
        c = step[2]
        used[c] += 1
        if tuple(used) in failed:
            used[c] -= 1
            continue
        visited += 1
        ops["ops"] += 1
        if visited > budget:
            raise SearchBudgetExceeded(f"exact ordering search exceeded {budget} states")
        slo += keys[c].lo
        shi += keys[c].hi
        order.append(step[1])
        chosen.append(c)
        stack.append(candidates())


def order_units(
    bounds: Sequence[Interval],
    m: MachineType,
    *,
    complete: bool = True,
    budget: int = DEFAULT_SEARCH_BUDGET,
    ops: MutableMapping[str, int] | None = None,
) -> list[int] | None:
    """Indices of ``bounds`` in an order whose partial sums all stay in ``m``.

    Returns ``None`` when no such order exists (or, with ``complete=False``,
    when the plain greedy loop fails).  May raise ``SearchBudgetExceeded``.
    """
    ops = ops if ops is not None else Counter()
    part = partition(bounds)
    definite = part.definite
    greedy = _greedy_numpy if _numpy_ok(bounds, definite, m) else _greedy_python
    order, ok = greedy(bounds, definite, m, ops)
    if not ok:
        if not complete:
            return None
        total = sum(b.lo for b in bounds), sum(b.hi for b in bounds)
        if not (m.min <= total[0] and total[1] <= m.max):
            return None
        order = _exact_order(bounds, definite, m, budget, ops)
        if order is None:
            return None
    slo = sum(bounds[j].lo for j in order)
    shi = sum(bounds[j].hi for j in order)
    for j in part.tops:
        slo += bounds[j].lo
        shi += bounds[j].hi
        ops["ops"] += 1
        if not (m.min <= slo and shi <= m.max):
            return None
        order.append(j)
    return order


def units_to_expr(units: Sequence[UnitTerm]) -> LinearExpr:
    return LinearExpr(tuple((u.sign, u.origin) for u in units))


def repair_sum(
    e: LinearExpr,
    env: AbstractEnv,
    m: MachineType,
    *,
    cap: int = DEFAULT_COEFFICIENT_CAP,
    complete: bool = True,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> RepairOutcome:
    """Find a non-overflowing, Z-equivalent reordering of ``e``."""
    units = preprocess(e, env, cap)
    ops: Counter = Counter()
    cert = certificate(e, env, m)
    if cert is not None:
        return RepairOutcome(Outcome.SAFE, e, tuple(cert), stats=ops)
    try:
        order = order_units([u.bound for u in units], m, complete=complete, budget=budget, ops=ops)
    except SearchBudgetExceeded as exc:
        return RepairOutcome(Outcome.UNKNOWN, reason=str(exc), stats=ops)
    if order is None:
        return RepairOutcome(
            Outcome.UNREPAIRABLE, reason="no order of the unit terms keeps every partial sum in range", stats=ops
        )
    repaired = units_to_expr([units[j] for j in order])
    cert = certificate(repaired, env, m)
    if cert is None or not z_equivalent(e, repaired):
        raise AssertionError(f"internal error: unverified repair {repaired} of {e}")
    return RepairOutcome(Outcome.REPAIRED, repaired, tuple(cert), stats=ops)
