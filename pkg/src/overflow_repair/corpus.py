"""Benchmark corpora and the census runner.

Sums: ``a1*x1 + ... + a6*x6`` with ``a_i`` in {0, 1, 2, 4} and at least four
non-zero coefficients (3402 expressions).  Relations: ``L < R`` over x1..x5
where every variable appears exactly once, on one side, with a coefficient
in {1, 2, 4}, and both sides are non-empty (7290 inequalities).
"""

from __future__ import annotations

import itertools
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .core import M32, BoolExpr, LinearExpr, MachineType
from .intervals import AbstractEnv, Interval
from .outcome import Outcome, RepairOutcome

SUM_COEFFICIENTS = (0, 1, 2, 4)
REL_COEFFICIENTS = (1, 2, 4)
MIN_NONZERO_TERMS = 4
P29 = 2**29

SUM_ENV = AbstractEnv(
    {
        "x1": Interval(0, P29),
        "x2": Interval(-P29, 0),
        "x3": Interval(-P29, P29),
        "x4": Interval(1, 1),
        "x5": Interval(-1, -1),
        "x6": Interval(-1, 1),
    }
)
REL_ENV = AbstractEnv({n: b for n, b in SUM_ENV.unary.items() if n != "x6"})
OCT_ENV = SUM_ENV.with_pairs({("x1", "x3", 1): Interval(-P29, P29), ("x1", "x2", 1): Interval(-P29, P29)})

PUBLISHED = {
    "sums": {"total": 3402, Outcome.SAFE: 1093, Outcome.UNREPAIRABLE: 2268, Outcome.REPAIRED: 43},
    "relations": {"total": 7290, "failed": 213},
}


def sum_corpus(min_nonzero: int = MIN_NONZERO_TERMS) -> list[LinearExpr]:
    out = []
    for coefs in itertools.product(SUM_COEFFICIENTS, repeat=6):
        if sum(1 for c in coefs if c) < max(min_nonzero, 1):
            continue
        out.append(LinearExpr.of(*((c, f"x{i + 1}") for i, c in enumerate(coefs) if c)))
    return out


def relation_corpus() -> list[BoolExpr]:
    out = []
    for sides in itertools.product((0, 1), repeat=5):
        if all(sides) or not any(sides):
            continue
        for coefs in itertools.product(REL_COEFFICIENTS, repeat=5):
            lhs = [(c, f"x{i + 1}") for i, (c, s) in enumerate(zip(coefs, sides)) if s == 0]
            rhs = [(c, f"x{i + 1}") for i, (c, s) in enumerate(zip(coefs, sides)) if s == 1]
            out.append(BoolExpr(LinearExpr.of(*lhs), "<", LinearExpr.of(*rhs)))
    return out


def _solve_box(e, env: AbstractEnv, m: MachineType) -> RepairOutcome:
    from .boolean import repair_relation
    from .linear import repair_sum

    return repair_relation(e, env, m) if isinstance(e, BoolExpr) else repair_sum(e, env, m)


def _solve_rel(e, env: AbstractEnv, m: MachineType) -> RepairOutcome:
    from .relational import repair_with_relations

    return repair_with_relations(e, env, m)


def _kinds(job):
    solver, chunk, env, m = job
    return [solver(e, env, m).kind for e in chunk]


def classify(exprs, solver, env: AbstractEnv, m: MachineType = M32, jobs: int = 1) -> list[Outcome]:
    """Outcome kind per expression, in input order."""
    if jobs <= 1 or len(exprs) < 2 * jobs:
        return [solver(e, env, m).kind for e in exprs]
    size = -(-len(exprs) // (jobs * 4))
    chunks = [(solver, exprs[i:i + size], env, m) for i in range(0, len(exprs), size)]
    with ProcessPoolExecutor(jobs) as pool:
        return [k for part in pool.map(_kinds, chunks) for k in part]


@dataclass(frozen=True)
class BenchResult:
    name: str
    kinds: tuple[Outcome, ...]
    seconds: float
    extra: dict = field(default_factory=dict)

    @property
    def counts(self) -> Counter:
        c = Counter({k: 0 for k in Outcome})
        c.update(self.kinds)
        return c

    @property
    def total(self) -> int:
        return len(self.kinds)

    def census_mismatches(self) -> list[str]:
        """Differences from the published numbers (empty when they match)."""
        c = self.counts
        out = []
        if self.name == "sums":
            pub = PUBLISHED["sums"]
            if self.total != pub["total"]:
                out.append(f"total {self.total} != {pub['total']}")
            for k in (Outcome.SAFE, Outcome.UNREPAIRABLE, Outcome.REPAIRED):
                if c[k] != pub[k]:
                    out.append(f"{k.value} {c[k]} != {pub[k]}")
        elif self.name == "relations":
            pub = PUBLISHED["relations"]
            failed = c[Outcome.UNREPAIRABLE] + c[Outcome.UNKNOWN]
            if self.total != pub["total"]:
                out.append(f"total {self.total} != {pub['total']}")
            if failed != pub["failed"]:
                out.append(f"failed {failed} != {pub['failed']}")
        elif self.name == "oct":
            if not self.extra.get("strict_superset", False):
                out.append("relational repairs are not a strict superset of the box repairs")
        return out

    def lines(self) -> list[str]:
        c = self.counts
        out = [f"{self.name}: {self.total} expressions"]
        if self.name == "relations":
            failed = c[Outcome.UNREPAIRABLE] + c[Outcome.UNKNOWN]
            out.append(f"  safe {c[Outcome.SAFE]}, repaired {c[Outcome.REPAIRED]}, failed {failed}")
        else:
            out.append(
                f"  safe {c[Outcome.SAFE]}, unrepairable {c[Outcome.UNREPAIRABLE]}, "
                f"repaired {c[Outcome.REPAIRED]}, unknown {c[Outcome.UNKNOWN]}"
            )
        if self.name == "oct":
            out.append(
                f"  repaired with pair facts {self.extra['oct_repaired']}, box only {self.extra['box_repaired']}, "
                f"strict superset: {'yes' if self.extra['strict_superset'] else 'no'}"
            )
        out.append(f"  wall time {self.seconds:.3f} s")
        return out


def run_bench(name: str, jobs: int = 1, m: MachineType = M32) -> BenchResult:
    t0 = time.perf_counter()
    if name == "sums":
        kinds = classify(sum_corpus(), _solve_box, SUM_ENV, m, jobs)
        return BenchResult(name, tuple(kinds), time.perf_counter() - t0)
    if name == "relations":
        kinds = classify(relation_corpus(), _solve_box, REL_ENV, m, jobs)
        return BenchResult(name, tuple(kinds), time.perf_counter() - t0)
    if name == "oct":
        exprs = sum_corpus()
        kinds = classify(exprs, _solve_rel, OCT_ENV, m, jobs)
        seconds = time.perf_counter() - t0
        box = classify(exprs, _solve_box, SUM_ENV, m, jobs)
        oct_rep = {i for i, k in enumerate(kinds) if k is Outcome.REPAIRED}
        box_rep = {i for i, k in enumerate(box) if k is Outcome.REPAIRED}
        extra = {
            "oct_repaired": len(oct_rep),
            "box_repaired": len(box_rep),
            "strict_superset": box_rep < oct_rep,
        }
        return BenchResult(name, tuple(kinds), seconds, extra)
    raise ValueError(f"unknown bench {name!r}")
