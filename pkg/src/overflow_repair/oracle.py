"""Brute-force ground truth for the repair procedures.

Nothing here calls into the repair modules: permutations are enumerated with
``itertools``, summation-graph paths are rebuilt from the raw facts, and
concrete checking walks every state of the box.  Caps are hard errors.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .core import BoolExpr, GroupedExpr, LinearExpr, MachineType
from .errors import ArithmeticOverflow, CapExceeded
from .intervals import AbstractEnv, Interval
from .semantics import eval_concrete, eval_z


@dataclass(frozen=True)
class OracleVerdict:
    safe_order_exists: bool
    witness: tuple | None = None
    counterexample: Mapping[str, int] | None = None

    def __bool__(self) -> bool:
        return self.safe_order_exists


def _bounds(terms) -> list[Interval]:
    return [t if isinstance(t, Interval) else t.bound for t in terms]


def _prefixes_ok(bounds: Sequence[Interval], m: MachineType) -> bool:
    lo = hi = 0
    for b in bounds:
        lo += b.lo
        hi += b.hi
        if lo < m.min or hi > m.max:
            return False
    return True


def brute_force_permutations(terms, m: MachineType, cap: int = 8) -> OracleVerdict:
    """Try every order of the unit terms (lexicographic, first witness wins)."""
    bounds = _bounds(terms)
    if len(bounds) > cap:
        raise CapExceeded(f"{len(bounds)} terms exceed the permutation cap {cap}")
    for perm in itertools.permutations(range(len(bounds))):
        if _prefixes_ok([bounds[i] for i in perm], m):
            return OracleVerdict(True, perm)
    return OracleVerdict(False)


# -- summation graph ------------------------------------------------------------


def _fact_weight(members, env: AbstractEnv) -> Interval | None:
    """Intersection of every pair/template fact describing exactly ``members``."""
    want = Counter((u.name, u.sign) for u in members)
    flipped = Counter((n, -s) for (n, s), k in want.items() for _ in range(k))
    found = []
    for (x, y, s), b in env.pairs.items():
        fact = Counter({(x, 1): 1, (y, s): 1})
        if fact == want:
            found.append(b)
        elif fact == flipped:
            found.append(Interval(-b.hi, -b.lo))
    for t in env.templates:
        fact = Counter()
        for n, c in t.coeffs:
            fact[(n, 1 if c > 0 else -1)] += abs(c)
        if fact == want:
            found.append(t.bound)
        elif fact == flipped:
            found.append(Interval(-t.bound.hi, -t.bound.lo))
    if not found:
        return None
    lo, hi = max(b.lo for b in found), min(b.hi for b in found)
    return Interval(lo, hi) if lo <= hi else found[0]


def _internal_order(members, m: MachineType):
    """First permutation of the group whose partial sums, except the full one, stay in range."""
    for perm in itertools.permutations(sorted(members, key=lambda u: u.index)):
        if _prefixes_ok([u.bound for u in perm[:-1]], m):
            return perm
    return None


def _edges(free, env: AbstractEnv, m: MachineType):
    for u in free:
        yield (u.index,), u.bound
    for size in range(2, len(free) + 1):
        for members in itertools.combinations(free, size):
            w = _fact_weight(members, env)
            if w is None or not (m.min <= w.lo and w.hi <= m.max):
                continue
            ordered = _internal_order(members, m)
            if ordered is None:
                continue
            yield tuple(u.index for u in ordered), w


def all_safe_paths(units, env: AbstractEnv, m: MachineType, cap: int = 5) -> Iterator[tuple]:
    """Every path from the empty set to all occurrences whose prefixes stay in range.

    A path is a tuple of groups, each a tuple of occurrence indices.
    """
    units = list(units)
    if len(units) > cap:
        raise CapExceeded(f"{len(units)} occurrences exceed the path cap {cap}")

    def walk(covered: frozenset, lo: int, hi: int, path: tuple):
        if len(covered) == len(units):
            yield path
            return
        free = [u for u in units if u.index not in covered]
        for added, w in _edges(free, env, m):
            nlo, nhi = lo + w.lo, hi + w.hi
            if m.min <= nlo and nhi <= m.max:
                yield from walk(covered | set(added), nlo, nhi, path + (added,))

    yield from walk(frozenset(), 0, 0, ())


def brute_force_paths(units, env: AbstractEnv, m: MachineType, cap: int = 5) -> OracleVerdict:
    for path in all_safe_paths(units, env, m, cap):
        return OracleVerdict(True, path)
    return OracleVerdict(False)


# -- concrete states --------------------------------------------------------------


def _states(names, env: AbstractEnv, m: MachineType, cap: int):
    names = sorted(names)
    ranges = []
    size = 1
    for n in names:
        b = env.bound(n)
        lo, hi = max(b.lo, m.min), min(b.hi, m.max)
        if lo > hi:
            return
        ranges.append(range(lo, hi + 1))
        size *= hi - lo + 1
        if size > cap:
            raise CapExceeded(f"more than {cap} concrete states")
    for values in itertools.product(*ranges):
        state = dict(zip(names, values))
        if env.satisfied_by(state):
            yield state


def exhaustive_concrete_check(
    original: LinearExpr | GroupedExpr | BoolExpr,
    repaired: LinearExpr | GroupedExpr | BoolExpr,
    env: AbstractEnv,
    m: MachineType,
    cap: int = 10**6,
) -> OracleVerdict:
    """Check a repair on every concrete state of the environment.

    Fails with the first state where the repair overflows, or where its Z
    value (Z truth, for relations) differs from the original's.
    """
    names = original.names() | repaired.names()
    for state in _states(names, env, m, cap):
        try:
            if isinstance(repaired, BoolExpr):
                eval_concrete(repaired.lhs, state, m)
                eval_concrete(repaired.rhs, state, m)
            else:
                eval_concrete(repaired, state, m)
        except ArithmeticOverflow:
            return OracleVerdict(False, counterexample=state)
        if isinstance(original, BoolExpr):
            before = original.holds(eval_z(original.lhs, state), eval_z(original.rhs, state))
            after = repaired.holds(eval_z(repaired.lhs, state), eval_z(repaired.rhs, state))
            if before != after:
                return OracleVerdict(False, counterexample=state)
        elif eval_z(original, state) != eval_z(repaired, state):
            return OracleVerdict(False, counterexample=state)
    return OracleVerdict(True)
