"""Repair reports: one record per query, as tab-separated lines or human text."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .outcome import Outcome, RepairOutcome, format_certificate

NO_EXPR = "-"
TSV_FIELDS = ("id", "kind", "outcome", "repaired", "microseconds")


@dataclass(frozen=True)
class RepairRecord:
    id: str
    kind: str
    outcome: Outcome
    text: str = NO_EXPR
    micros: int = 0
    certificate: str = ""
    reason: str = ""

    @classmethod
    def from_outcome(cls, qid: str, kind: str, out: RepairOutcome, micros: int) -> "RepairRecord":
        text = str(out.expr) if out.expr is not None else NO_EXPR
        cert = format_certificate(out.certificate) if out.certificate else ""
        return cls(qid, kind, out.kind, text, micros, cert, out.reason)

    def tsv(self) -> str:
        return "\t".join((self.id, self.kind, self.outcome.value, self.text, str(self.micros)))


@dataclass(frozen=True)
class RepairReport:
    records: tuple[RepairRecord, ...] = ()
    meta: dict = field(default_factory=dict)

    @property
    def counts(self) -> Counter:
        c = Counter({k: 0 for k in Outcome})
        c.update(r.outcome for r in self.records)
        return c

    @property
    def all_resolved(self) -> bool:
        return all(r.outcome in (Outcome.SAFE, Outcome.REPAIRED) for r in self.records)

    def tsv(self) -> str:
        return "".join(r.tsv() + "\n" for r in self.records)

    def human(self) -> str:
        lines = []
        for r in self.records:
            lines.append(f"{r.id} [{r.kind}] {r.outcome.value}: {r.text}  ({r.micros} us)")
            if r.certificate:
                lines.append(f"    prefixes: {r.certificate}")
            if r.reason:
                lines.append(f"    {r.reason}")
        lines.append(summary_line(self.counts, len(self.records)))
        return "\n".join(lines) + "\n"


def summary_line(counts: Counter, total: int) -> str:
    parts = ", ".join(f"{k.value} {counts.get(k, 0)}" for k in Outcome)
    return f"{total} queries: {parts}"


def parse_tsv(text: str) -> list[RepairRecord]:
    """Inverse of :meth:`RepairReport.tsv` (certificate and reason are not stored)."""
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != len(TSV_FIELDS):
            raise ValueError(f"line {lineno}: expected {len(TSV_FIELDS)} tab-separated fields, got {len(fields)}")
        qid, kind, outcome, text_, micros = fields
        out.append(RepairRecord(qid, kind, Outcome(outcome), text_, int(micros)))
    return out


def merge(records: Iterable[RepairRecord], meta: dict | None = None) -> RepairReport:
    return RepairReport(tuple(records), meta or {})


def outcomes(records: Sequence[RepairRecord]) -> list[Outcome]:
    return [r.outcome for r in records]
