"""Repairing comparisons ``e1 <op> e2`` by moving terms across the operator.

While either side has no safe evaluation order, the side whose interval is
farther from zero gives up its unmoved occurrence of largest magnitude; the
occurrence reappears negated on the other side.  Every occurrence moves at
most once, so the loop runs at most ``n`` times.  The procedure is sound but
not complete: failure does not prove that no rewrite exists.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .core import BoolExpr, LinearExpr, MachineType, z_equivalent_rel
from .intervals import AbstractEnv, Interval, interval_sum
from .linear import (
    DEFAULT_COEFFICIENT_CAP,
    DEFAULT_SEARCH_BUDGET,
    SearchBudgetExceeded,
    UnitTerm,
    order_units,
    preprocess,
)
from .outcome import Outcome, RepairOutcome
from .semantics import certificate


def select_candidate(xs: Sequence[tuple[int, Interval]], m: MachineType) -> int | None:
    """Occurrence with the largest distance from zero whose interval excludes ``m.min``.

    Ties go to the lowest occurrence id; ``None`` means nothing can be moved.
    """
    best = None
    for occ, iv in xs:
        if m.min in iv:
            continue
        key = (-iv.distance(), occ)
        if best is None or key < best:
            best = key
    return None if best is None else best[1]


@dataclass
class MoveState:
    """Mutable bookkeeping local to one ``repair_relation`` call."""

    units: list[UnitTerm]
    left: list[int]
    right: list[int]
    bounds: dict[int, Interval]
    moved: set[int] = field(default_factory=set)

    def interval(self, side: list[int]) -> Interval:
        return interval_sum(self.bounds[j] for j in side)

    def move(self, occ: int) -> None:
        src, dst = (self.left, self.right) if occ in self.left else (self.right, self.left)
        src.remove(occ)
        dst.append(occ)
        self.moved.add(occ)
        self.bounds[occ] = -self.bounds[occ]

    def sign(self, occ: int) -> int:
        u = self.units[occ]
        return -u.sign if occ in self.moved else u.sign


def _side_expr(state: MoveState, side: list[int]) -> LinearExpr:
    return LinearExpr(tuple((state.sign(j), state.units[j].origin) for j in side))


def repair_relation(
    b: BoolExpr,
    env: AbstractEnv,
    m: MachineType,
    *,
    cap: int = DEFAULT_COEFFICIENT_CAP,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> RepairOutcome:
    lhs_cert = certificate(b.lhs, env, m)
    rhs_cert = certificate(b.rhs, env, m)
    copies: Counter = Counter()
    left_units = preprocess(b.lhs, env, cap, copies=copies)
    right_units = preprocess(b.rhs, env, cap, start=len(left_units), copies=copies)
    if lhs_cert is not None and rhs_cert is not None:
        return RepairOutcome(Outcome.SAFE, b, (tuple(lhs_cert), tuple(rhs_cert)))

    units = left_units + right_units
    state = MoveState(
        units,
        [u.index for u in left_units],
        [u.index for u in right_units],
        {u.index: u.bound for u in units},
    )
    ops: Counter = Counter()

    def safe_order(side: list[int]) -> list[int] | None:
        # a side that is already safe in its current order keeps that order
        if certificate(_side_expr(state, side), env, m) is not None:
            return list(side)
        order = order_units([state.bounds[j] for j in side], m, budget=budget, ops=ops)
        return None if order is None else [side[k] for k in order]

    try:
        while True:
            lorder, rorder = safe_order(state.left), safe_order(state.right)
            if lorder is not None and rorder is not None:
                break
            if state.interval(state.left).distance() >= state.interval(state.right).distance():
                side = state.left
            else:
                side = state.right
            occ = select_candidate([(j, state.bounds[j]) for j in side if j not in state.moved], m)
            if occ is None:
                return RepairOutcome(
                    Outcome.UNREPAIRABLE,
                    reason="no movable term left on the overflowing side",
                    stats={**ops, "moves": len(state.moved)},
                )
            state.move(occ)
    except SearchBudgetExceeded as exc:
        return RepairOutcome(Outcome.UNKNOWN, reason=str(exc), stats={**ops, "moves": len(state.moved)})

    repaired = BoolExpr(_side_expr(state, lorder), b.op, _side_expr(state, rorder))
    lc, rc = certificate(repaired.lhs, env, m), certificate(repaired.rhs, env, m)
    if lc is None or rc is None or not z_equivalent_rel(b, repaired):
        raise AssertionError(f"internal error: unverified repair {repaired} of {b}")
    return RepairOutcome(
        Outcome.REPAIRED, repaired, (tuple(lc), tuple(rc)), stats={**ops, "moves": len(state.moved)}
    )
