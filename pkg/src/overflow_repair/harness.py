"""Query dispatch shared by the command line and the tests."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .boolean import repair_relation
from .core import BoolExpr, LinearExpr, MachineType, z_equivalent, z_equivalent_rel
from .errors import CapExceeded, CoefficientCapExceeded, ParseError
from .intervals import AbstractEnv
from .linear import repair_sum
from .oracle import exhaustive_concrete_check
from .outcome import Outcome, RepairOutcome
from .problem import ProblemFile, Query, parse_repair_text
from .relational import repair_with_relations
from .report import NO_EXPR, RepairRecord, RepairReport
from .semantics import certificate

DOMAINS = ("box", "oct", "template")


def domain_env(env: AbstractEnv, domain: str) -> AbstractEnv:
    """Restrict the environment to the facts the chosen domain can express."""
    if domain == "box":
        return env.without_relations()
    if domain == "oct":
        return AbstractEnv(env.unary, env.pairs)
    if domain == "template":
        return env
    raise ValueError(f"unknown domain {domain!r}")


def solve(expr: LinearExpr | BoolExpr, env: AbstractEnv, m: MachineType, domain: str = "box") -> RepairOutcome:
    """Sums go to the greedy reordering (box) or the path search (oct/template);
    relations always go to term moving, which only reads unary bounds."""
    env = domain_env(env, domain)
    try:
        if isinstance(expr, BoolExpr):
            return repair_relation(expr, env, m)
        if domain == "box":
            return repair_sum(expr, env, m)
        return repair_with_relations(expr, env, m)
    except CoefficientCapExceeded as exc:
        return RepairOutcome(Outcome.UNKNOWN, reason=str(exc))


def _timed(args) -> RepairRecord:
    q, env, m, domain = args
    t0 = time.perf_counter_ns()
    out = solve(q.expr, env, m, domain)
    micros = (time.perf_counter_ns() - t0) // 1000
    return RepairRecord.from_outcome(q.id, q.kind, out, micros)


def repair_problem(p: ProblemFile, domain: str = "box", machine: MachineType | None = None, jobs: int = 1) -> RepairReport:
    m = machine or p.machine
    work = [(q, p.env, m, domain) for q in p.queries]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(jobs) as pool:
            records = list(pool.map(_timed, work))
    else:
        records = [_timed(w) for w in work]
    return RepairReport(tuple(records), {"domain": domain, "machine": str(m)})


@dataclass(frozen=True)
class CheckRecord:
    id: str
    kind: str
    safe: bool
    certificate: str = ""

    def line(self) -> str:
        return f"{self.id}\t{self.kind}\t{'safe' if self.safe else 'may-overflow'}"


def _certificates(expr, env: AbstractEnv, m: MachineType):
    if isinstance(expr, BoolExpr):
        left, right = certificate(expr.lhs, env, m), certificate(expr.rhs, env, m)
        return None if left is None or right is None else (tuple(left), tuple(right))
    cert = certificate(expr, env, m)
    return None if cert is None else tuple(cert)


def check_problem(p: ProblemFile, machine: MachineType | None = None) -> list[CheckRecord]:
    """Split queries into those proven overflow-free as written and the rest."""
    m = machine or p.machine
    out = []
    for q in p.queries:
        cert = _certificates(q.expr, p.env, m)
        out.append(CheckRecord(q.id, q.kind, cert is not None, "" if cert is None else str(cert)))
    return out


@dataclass(frozen=True)
class VerifyRecord:
    id: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"{self.id}\t{'ok' if self.ok else 'FAILED'}\t{self.detail}"


def verify_repair(q: Query, text: str, env: AbstractEnv, m: MachineType, state_cap: int = 10**6) -> VerifyRecord:
    """Certificate, Z-equivalence and (when the box is small enough) every concrete state."""
    try:
        repaired = parse_repair_text(text, q.kind)
    except ParseError as exc:
        return VerifyRecord(q.id, False, f"unparsable repair: {exc}")
    if isinstance(q.expr, BoolExpr) != isinstance(repaired, BoolExpr):
        return VerifyRecord(q.id, False, "repair and query differ in kind")
    if _certificates(repaired, env, m) is None:
        return VerifyRecord(q.id, False, "no overflow-free certificate")
    same = z_equivalent_rel(q.expr, repaired) if isinstance(repaired, BoolExpr) else z_equivalent(q.expr, repaired)
    if not same:
        return VerifyRecord(q.id, False, "not Z-equivalent to the query")
    try:
        verdict = exhaustive_concrete_check(q.expr, repaired, env, m, cap=state_cap)
    except CapExceeded:
        return VerifyRecord(q.id, True, "certificate and Z-equivalence ok; state space too large to enumerate")
    if not verdict.safe_order_exists:
        return VerifyRecord(q.id, False, f"concrete counterexample {dict(verdict.counterexample)}")
    return VerifyRecord(q.id, True, "certificate, Z-equivalence and all concrete states ok")


def verify_problem(
    p: ProblemFile,
    records: list[RepairRecord] | None = None,
    machine: MachineType | None = None,
    state_cap: int = 10**6,
) -> list[VerifyRecord]:
    """Verify the file's embedded repairs, or the rewrites listed in ``records``."""
    m = machine or p.machine
    if records is None:
        pairs = list(p.repairs.items())
    else:
        pairs = [(r.id, r.text) for r in records if r.text != NO_EXPR]
    out = []
    for qid, text in pairs:
        try:
            q = p.query(qid)
        except KeyError:
            out.append(VerifyRecord(qid, False, "no such query in the problem file"))
            continue
        out.append(verify_repair(q, text, p.env, m, state_cap))
    return out

