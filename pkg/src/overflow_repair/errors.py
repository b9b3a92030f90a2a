"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class RepairError(Exception):
    """Base class for all errors raised by overflow_repair."""


class UnboundVariable(RepairError, KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"variable {self.name!r} has no bound in the abstract environment"


class CoefficientCapExceeded(RepairError, ValueError):
    """A coefficient would expand into more unit terms than allowed."""

    def __init__(self, name: str, coefficient: int, cap: int):
        super().__init__(f"|{coefficient}| * {name} exceeds the coefficient cap {cap}")
        self.name = name
        self.coefficient = coefficient
        self.cap = cap


class CapExceeded(RepairError, ValueError):
    """An oracle was asked to enumerate beyond its configured size."""


class InconsistentEnvironment(RepairError, ValueError):
    pass


class ParseError(RepairError, ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class ArithmeticOverflow(RepairError, OverflowError):
    """Raised by the checked evaluator when an intermediate leaves the machine range.

    ``position`` is the index of the term (or group) whose evaluation failed and
    ``value`` the exact, unrepresentable result.
    """

    def __init__(self, position: int, value: int):
        super().__init__(f"overflow at term {position}: {value} is not representable")
        self.position = position
        self.value = value
