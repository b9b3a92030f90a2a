"""Sum repair with relational facts: depth-first search over subsets of occurrences.

Nodes of the (implicit) graph are sets of already-summed occurrences.  An
edge adds one occurrence (weight: its bound), a pair of occurrences covered
by a pair fact (weight: the fact), or all occurrences of a template (weight:
the template bound).  A path from the empty set to the full set whose
running weight never leaves the machine range is a parenthesization that
cannot overflow.  The search is exhaustive, hence complete, and exponential
in the worst case.

Two reductions keep it tractable without losing completeness: copies of the
same variable with the same sign are interchangeable, so only the lowest
uncovered copy is ever extended; and a failed (copy counts, running
interval) state also refutes any later visit with a wider running interval.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import combinations
from math import lcm
from typing import Sequence

from .core import GroupedExpr, LinearExpr, MachineType, z_equivalent
from .intervals import ZERO, AbstractEnv, Interval
from .linear import DEFAULT_COEFFICIENT_CAP, UnitTerm, order_units, preprocess
from .outcome import Outcome, RepairOutcome
from .semantics import certificate

DEFAULT_NODE_BUDGET = 1_000_000
MAX_OCCURRENCES = 400


@dataclass(frozen=True)
class Step:
    """One edge: the occurrences it adds (in evaluation order) and its weight."""

    added: tuple[int, ...]
    weight: Interval
    kind: str  # "unary" | "pair" | "template"
    ref: object = None


@dataclass(frozen=True)
class SearchPath:
    steps: tuple[Step, ...] = ()
    covered: frozenset[int] = frozenset()
    partial: Interval = ZERO

    def extend(self, step: Step) -> "SearchPath":
        return SearchPath(self.steps + (step,), self.covered | set(step.added), self.partial + step.weight)

    def prefixes(self) -> list[Interval]:
        out, acc = [], ZERO
        for s in self.steps:
            acc = acc + s.weight
            out.append(acc)
        return out


def _inner_ok(units: Sequence[UnitTerm], added: Sequence[int], m: MachineType) -> bool:
    acc = ZERO
    for j in added[:-1]:
        acc = acc + units[j].bound
        if not acc.within(m):
            return False
    return True


def _inner_order(units: Sequence[UnitTerm], added: Sequence[int], m: MachineType) -> list[int] | None:
    """An evaluation order of ``added`` whose partial sums (all but the full one) stay in range."""
    if _inner_ok(units, added, m):
        return list(added)
    tried = set()
    for k, last in enumerate(added):
        cls = (units[last].name, units[last].sign)
        if cls in tried:
            continue
        tried.add(cls)
        rest = list(added[:k]) + list(added[k + 1:])
        order = order_units([units[j].bound for j in rest], m)
        if order is not None:
            return [rest[i] for i in order] + [last]
    return None


def _group_step(units, added, env, m, kind, ref) -> Step | None:
    weight = env.group_bound([(units[j].sign, units[j].name) for j in added])
    if weight is None or not weight.within(m):
        return None
    ordered = _inner_order(units, added, m)
    if ordered is None:
        return None
    return Step(tuple(ordered), weight, kind, ref)


def successors(path: SearchPath, units: Sequence[UnitTerm], env: AbstractEnv, m: MachineType) -> list[Step]:
    """All edges leaving ``path``'s last node.

    One unary step per uncovered occurrence; one pair step per pair of
    (name, sign) classes related by a pair fact; one template step per
    template (or its negation) whose occurrences are all uncovered.  Group
    steps use the lowest-numbered uncovered copies and are only generated if
    some internal evaluation order cannot overflow.
    """
    free = [u for u in units if u.index not in path.covered]
    steps = [Step((u.index,), u.bound, "unary", u.name) for u in free]
    classes: dict[tuple[str, int], list[int]] = defaultdict(list)
    for u in free:
        classes[(u.name, u.sign)].append(u.index)
    seen: set[tuple[int, ...]] = set()
    for (c1, js1), (c2, js2) in combinations(sorted(classes.items(), key=lambda kv: kv[1][0]), 2):
        if c1[0] == c2[0]:
            continue
        if env.pair_bound(c1[0], c2[0], c1[1] * c2[1]) is None:
            continue
        added = tuple(sorted((js1[0], js2[0])))
        step = _group_step(units, added, env, m, "pair", (c1, c2))
        if step is not None:
            seen.add(tuple(sorted(added)))
            steps.append(step)
    for ti, t in enumerate(env.templates):
        expansion = t.expansion()
        if len(expansion) < 2:
            continue
        for flip in (1, -1):
            taken: Counter = Counter()
            added = []
            for name, s in expansion:
                pool = classes.get((name, s * flip), [])
                k = taken[(name, s * flip)]
                if k >= len(pool):
                    break
                added.append(pool[k])
                taken[(name, s * flip)] += 1
            else:
                key = tuple(sorted(added))
                if key in seen:
                    continue
                step = _group_step(units, added, env, m, "template", (ti, flip))
                if step is not None:
                    seen.add(key)
                    steps.append(step)
    return steps


def _pick_key(step: Step, path: SearchPath) -> tuple:
    return ((path.partial + step.weight).distance(), len(step.added), tuple(sorted(step.added)))


def pick_one(candidates: Sequence[Step], path: SearchPath) -> Step:
    """Candidate minimizing the distance from zero of the extended running weight.

    Ties: fewer occurrences added, then lowest occurrence ids.
    """
    return min(candidates, key=lambda s: _pick_key(s, path))


class _NodeBudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class _Move:
    """A step lifted to (name, sign) classes: which classes it consumes, in order."""

    seq: tuple[int, ...]
    need: tuple[tuple[int, int], ...]
    weight: Interval
    kind: str
    ref: object


def _class_moves(units, env, m, pos, cls_of) -> list[_Move]:
    # Group steps are valid at a node iff enough copies remain; their weight and
    # internal order do not depend on the node, so the root enumerates them all.
    moves = []
    seen_unary = set()
    for step in successors(SearchPath(), units, env, m):
        seq = tuple(pos[cls_of[j]] for j in step.added)
        if step.kind == "unary":
            if seq in seen_unary:
                continue
            seen_unary.add(seq)
        moves.append(_Move(seq, tuple(sorted(Counter(seq).items())), step.weight, step.kind, step.ref))
    return moves


def _search(units, env, m, memoize: bool, budget: int, stats: Counter) -> SearchPath | None:
    cls_of = {u.index: (u.name, u.sign) for u in units}
    order = sorted(set(cls_of.values()))
    pos = {c: i for i, c in enumerate(order)}
    members = [[u.index for u in units if cls_of[u.index] == c] for c in order]
    sizes = [len(ms) for ms in members]
    moves = _class_moves(units, env, m, pos, cls_of)
    failed: dict[tuple[int, ...], list[Interval]] = defaultdict(list)
    total = len(units)
    used = [0] * len(order)

    # Admissible bound: every remaining occurrence contributes at least the
    # cheapest per-occurrence share of some move to the final interval, so a
    # node whose optimistic total already leaves the range has no completion.
    scale = lcm(*(len(mv.seq) for mv in moves)) if moves else 1
    hi_share = [None] * len(order)
    lo_share = [None] * len(order)
    for mv in moves:
        k = len(mv.seq)
        for c, _ in mv.need:
            h, lo = mv.weight.hi * scale // k, mv.weight.lo * scale // k
            hi_share[c] = h if hi_share[c] is None else min(hi_share[c], h)
            lo_share[c] = lo if lo_share[c] is None else max(lo_share[c], lo)
    top, bottom = m.max * scale, m.min * scale

    def hopeless(partial: Interval) -> bool:
        rest_hi = sum((sizes[c] - used[c]) * hi_share[c] for c in range(len(order)))
        rest_lo = sum((sizes[c] - used[c]) * lo_share[c] for c in range(len(order)))
        return partial.hi * scale + rest_hi > top or partial.lo * scale + rest_lo < bottom

    def added_ids(mv: _Move) -> tuple[int, ...]:
        offset: Counter = Counter()
        out = []
        for c in mv.seq:
            out.append(members[c][used[c] + offset[c]])
            offset[c] += 1
        return tuple(out)

    def dfs(partial: Interval, trail: list[Step], covered: int) -> list[Step] | None:
        stats["nodes"] += 1
        if stats["nodes"] > budget:
            raise _NodeBudgetExceeded
        if covered == total:
            return trail
        key = tuple(used)
        if memoize and any(f.issubset(partial) for f in failed[key]):
            stats["pruned"] += 1
            return None
        if hopeless(partial):
            stats["bounded"] += 1
            return None
        cands = []
        for mv in moves:
            if any(used[c] + k > sizes[c] for c, k in mv.need):
                continue
            nxt = partial + mv.weight
            if not nxt.within(m):
                continue
            ids = added_ids(mv)
            cands.append(((nxt.distance(), len(ids), tuple(sorted(ids))), mv, ids, nxt))
        cands.sort(key=lambda t: t[0])
        for _, mv, ids, nxt in cands:
            for c, k in mv.need:
                used[c] += k
            found = dfs(nxt, trail + [Step(ids, mv.weight, mv.kind, mv.ref)], covered + len(ids))
            for c, k in mv.need:
                used[c] -= k
            if found is not None:
                return found
        if memoize:
            failed[key].append(partial)
        return None

    steps = dfs(ZERO, [], 0)
    if steps is None:
        return None
    path = SearchPath()
    for st in steps:
        path = path.extend(st)
    return path


def path_to_expr(path: SearchPath, units: Sequence[UnitTerm]) -> GroupedExpr:
    return GroupedExpr(tuple(tuple((units[j].sign, units[j].origin) for j in s.added) for s in path.steps))


def repair_with_relations(
    e: LinearExpr,
    env: AbstractEnv,
    m: MachineType,
    *,
    cap: int = DEFAULT_COEFFICIENT_CAP,
    memoize: bool = True,
    budget: int = DEFAULT_NODE_BUDGET,
) -> RepairOutcome:
    units = preprocess(e, env, cap)
    cert = certificate(e, env, m)
    if cert is not None:
        return RepairOutcome(Outcome.SAFE, e, tuple(cert))
    if len(units) > MAX_OCCURRENCES:
        return RepairOutcome(Outcome.UNKNOWN, reason=f"more than {MAX_OCCURRENCES} occurrences")
    stats: Counter = Counter()
    try:
        path = _search(units, env, m, memoize, budget, stats)
    except _NodeBudgetExceeded:
        return RepairOutcome(Outcome.UNKNOWN, reason=f"search exceeded {budget} nodes", stats=stats)
    if path is None:
        return RepairOutcome(
            Outcome.UNREPAIRABLE, reason="no path through the summation graph stays in range", stats=stats
        )
    repaired = path_to_expr(path, units)
    cert = certificate(repaired, env, m)
    if cert is None or cert != path.prefixes() or not z_equivalent(e, repaired):
        raise AssertionError(f"internal error: unverified repair {repaired} of {e}")
    return RepairOutcome(Outcome.REPAIRED, repaired, tuple(cert), stats=stats)
