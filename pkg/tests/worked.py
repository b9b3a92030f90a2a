"""Worked instances shared by the test modules."""

from pathlib import Path

from overflow_repair import M4, M32, AbstractEnv, BoolExpr, Interval, LinearExpr
from overflow_repair.parse import parse_bool, parse_linear

DATA = Path(__file__).parent / "data"

# seven-term reordering instance at 4 bits
SEVEN_ENV = AbstractEnv.box(
    x1=(-2, 3), x2=(-1, 0), x3=(1, 2), x4=(-3, -1), x5=(-3, -2), x6=(-1, 1), x7=(2, 4)
)
SEVEN = parse_linear("x1 + x2 + x3 + x4 + x5 + x6 + x7")
SEVEN_PUBLISHED = parse_linear("x3 + x7 + x4 + x5 + x2 + x6 + x1")
SEVEN_STATE = {"x1": -2, "x2": -1, "x3": 1, "x4": -3, "x5": -3, "x6": -1, "x7": 2}

# term moving across a comparison at 4 bits
MOVES_ENV = AbstractEnv.box(x1=(-1, 1), x2=(-2, 0), x3=(1, 2), x4=(2, 3), x5=(5, 6))
MOVES = parse_bool("x1 + x2 <= x3 + x4 + x5")
MOVES_PUBLISHED = parse_bool("x1 - x5 <= x3 + x4 - x2")

# array precondition at 32 bits
TOP = 2**31 - 1
SUBARRAY_ENV = AbstractEnv({"start": Interval(0, TOP), "count": Interval(0, TOP), "arr.Length": Interval(0, TOP)})
SUBARRAY = parse_bool("start + count <= arr.Length")
SUBARRAY_PUBLISHED = parse_bool("start <= arr.Length - count")

# three variables with pair facts at 4 bits
XYZ_ENV = AbstractEnv(
    {"x": Interval(-2, 2), "y": Interval(-1, 3), "z": Interval(-1, 4)},
    {("x", "y", 1): Interval(-2, 3), ("y", "z", 1): Interval(-2, 4), ("x", "z", 1): Interval(-1, 5)},
)
XYZ = parse_linear("x + y + z")

# negation of a strictly negative 32-bit value
NEG_ENV = AbstractEnv({"y": Interval(-(2**31), -1)})
NEG = LinearExpr.of((-1, "y"))

__all__ = [
    "DATA", "M4", "M32", "BoolExpr",
    "SEVEN_ENV", "SEVEN", "SEVEN_PUBLISHED", "SEVEN_STATE",
    "MOVES_ENV", "MOVES", "MOVES_PUBLISHED",
    "SUBARRAY_ENV", "SUBARRAY", "SUBARRAY_PUBLISHED",
    "XYZ_ENV", "XYZ", "NEG_ENV", "NEG",
]
