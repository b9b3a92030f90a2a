"""Synthesis of non-overflowing, Z-equivalent rewrites of integer expressions."""

from .core import (
    M4,
    M8,
    M16,
    M32,
    M64,
    BoolExpr,
    GroupedExpr,
    LinearExpr,
    MachineType,
    VarId,
    canonicalize,
    z_equivalent,
    z_equivalent_rel,
)
from .errors import (
    ArithmeticOverflow,
    CapExceeded,
    CoefficientCapExceeded,
    InconsistentEnvironment,
    ParseError,
    RepairError,
    UnboundVariable,
)
from .intervals import AbstractEnv, Interval, Template
from .outcome import Outcome, RepairOutcome

__all__ = [
    "M4", "M8", "M16", "M32", "M64",
    "BoolExpr", "GroupedExpr", "LinearExpr", "MachineType", "VarId",
    "canonicalize", "z_equivalent", "z_equivalent_rel",
    "ArithmeticOverflow", "CapExceeded", "CoefficientCapExceeded", "InconsistentEnvironment",
    "ParseError", "RepairError", "UnboundVariable",
    "AbstractEnv", "Interval", "Template",
    "Outcome", "RepairOutcome",
]
