from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

from .core import AnyExpr


class Outcome(str, enum.Enum):
    SAFE = "safe"
    REPAIRED = "repaired"
    UNREPAIRABLE = "unrepairable"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class RepairOutcome:
    """Result of a repair attempt.

    ``expr`` is the rewritten expression for ``REPAIRED`` (and the unchanged
    input for ``SAFE``); ``certificate`` holds the prefix intervals of the
    emitted evaluation order.  ``stats`` carries operation counters used by the
    complexity checks.
    """

    kind: Outcome
    expr: AnyExpr | None = None
    certificate: tuple = ()
    reason: str = ""
    stats: Mapping[str, int] = field(default_factory=dict)

    @property
    def resolved(self) -> bool:
        return self.kind in (Outcome.SAFE, Outcome.REPAIRED)

    def __str__(self) -> str:
        if self.kind is Outcome.REPAIRED:
            return f"repaired: {self.expr}"
        if self.kind is Outcome.SAFE:
            return "safe"
        return f"{self.kind.value}: {self.reason}" if self.reason else self.kind.value


def format_certificate(cert) -> str:
    """Render a certificate; relation certificates are a (left, right) pair."""
    if cert and isinstance(cert[0], tuple):
        return " | ".join(format_certificate(c) for c in cert)
    return " ".join(str(i) for i in cert)

