"""Seeded random instances for the completeness and soundness suites."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import M4, M8, BoolExpr, LinearExpr, MachineType
from .intervals import AbstractEnv, Interval
from .linear import preprocess, repair_sum
from .oracle import brute_force_paths, brute_force_permutations
from .outcome import Outcome
from .relational import repair_with_relations


@dataclass(frozen=True)
class Instance:
    expr: LinearExpr | BoolExpr
    env: AbstractEnv
    machine: MachineType


def _interval(rng: random.Random, lo: int, hi: int) -> Interval:
    a, b = rng.randint(lo, hi), rng.randint(lo, hi)
    return Interval(min(a, b), max(a, b))


def _biased_interval(rng: random.Random, lo: int, hi: int) -> Interval:
    # mostly narrow sign-definite bounds, so that the order actually matters
    r = rng.random()
    if r < 0.4 and hi >= 1:
        a = rng.randint(1, hi)
        return Interval(a, min(hi, a + rng.randint(0, 3)))
    if r < 0.8 and lo <= -1:
        a = rng.randint(lo, -1)
        return Interval(max(lo, a - rng.randint(0, 3)), a)
    return _interval(rng, lo, hi)


def random_sum(rng: random.Random, max_terms: int = 7, lo: int = -16, hi: int = 15, machines=(M4, M8)) -> Instance:
    """A sum of ``k <= max_terms`` unit terms over distinct variables."""
    k = rng.randint(1, max_terms)
    m = rng.choice(machines)
    names = [f"v{i}" for i in range(k)]
    env = AbstractEnv({n: _biased_interval(rng, max(lo, m.min), min(hi, m.max)) for n in names})
    expr = LinearExpr.of(*((rng.choice((1, -1)), n) for n in names))
    return Instance(expr, env, m)


def random_relational_sum(rng: random.Random, max_occurrences: int = 4, machine: MachineType = M4) -> Instance:
    """Up to ``max_occurrences`` signed occurrences over three variables, with random pair facts."""
    names = ["x", "y", "z"]
    unary = {n: _interval(rng, machine.min, machine.max) for n in names}
    pairs = {}
    for i, x in enumerate(names):
        for y in names[i + 1:]:
            for s in (1, -1):
                if rng.random() < 0.35:
                    box = unary[x] + (unary[y] if s == 1 else -unary[y])
                    pairs[(x, y, s)] = _interval(rng, box.lo, box.hi)
    k = rng.randint(1, max_occurrences)
    expr = LinearExpr.of(*((rng.choice((1, -1)), rng.choice(names)) for _ in range(k)))
    return Instance(expr, AbstractEnv(unary, pairs), machine)


def sum_disagreement(inst: Instance) -> str | None:
    """Compare the sum repair against permutation enumeration; ``None`` when they agree."""
    out = repair_sum(inst.expr, inst.env, inst.machine)
    units = preprocess(inst.expr, inst.env)
    exists = brute_force_permutations(units, inst.machine, cap=len(units)).safe_order_exists
    if out.kind is Outcome.UNKNOWN or (out.kind is Outcome.UNREPAIRABLE) == exists:
        return f"{inst.expr} under {inst.env} at {inst.machine}: {out.kind.value}, oracle says {exists}"
    return None


def path_disagreement(inst: Instance) -> str | None:
    """Compare the path search against path enumeration; ``None`` when they agree."""
    out = repair_with_relations(inst.expr, inst.env, inst.machine)
    units = preprocess(inst.expr, inst.env)
    exists = brute_force_paths(units, inst.env, inst.machine, cap=len(units)).safe_order_exists
    if out.kind is Outcome.UNKNOWN or (out.kind is Outcome.UNREPAIRABLE) == exists:
        return f"{inst.expr} under {inst.env} at {inst.machine}: {out.kind.value}, oracle says {exists}"
    return None
