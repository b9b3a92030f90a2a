"""Exact, unbounded integer intervals and the abstract environment built on them.

There is no bottom and no widening: environments are inputs produced by some
analyzer, never the result of a fixpoint computation here.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .core import MachineType
from .errors import InconsistentEnvironment, UnboundVariable


@dataclass(frozen=True, order=True)
class Interval:
    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, v: int) -> "Interval":
        return cls(v, v)

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def scale(self, k: int) -> "Interval":
        a, b = self.lo * k, self.hi * k
        return Interval(min(a, b), max(a, b))

    def __contains__(self, v: int) -> bool:
        return self.lo <= v <= self.hi

    def issubset(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def within(self, m: MachineType) -> bool:
        return m.min <= self.lo and self.hi <= m.max

    def distance(self) -> int:
        """Distance from zero: ``max(|lo|, |hi|)``."""
        return max(abs(self.lo), abs(self.hi))

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


ZERO = Interval(0, 0)


def add(a: Interval, b: Interval) -> Interval:
    return a + b


def negate(a: Interval) -> Interval:
    return -a


def within_machine(a: Interval, m: MachineType) -> bool:
    return a.within(m)


def distance_from_zero(a: Interval) -> int:
    return a.distance()


def interval_sum(xs: Iterable[Interval]) -> Interval:
    lo = hi = 0
    for x in xs:
        lo += x.lo
        hi += x.hi
    return Interval(lo, hi)


@dataclass(frozen=True)
class Template:
    """A bound ``lo <= sum(coef * name) <= hi`` on a fixed linear form."""

    coeffs: tuple[tuple[str, int], ...]
    bound: Interval

    def __post_init__(self) -> None:
        merged: Counter[str] = Counter()
        for name, c in self.coeffs:
            merged[name] += c
        coeffs = tuple((n, c) for n, c in merged.items() if c != 0)
        if not coeffs:
            raise InconsistentEnvironment("template has no non-zero coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    def signed_counts(self) -> Counter:
        """Multiset of (name, sign) occurrences after unit expansion."""
        out: Counter = Counter()
        for n, c in self.coeffs:
            out[(n, 1 if c > 0 else -1)] += abs(c)
        return out

    def expansion(self) -> list[tuple[str, int]]:
        """(name, sign) occurrences in template order."""
        return [(n, 1 if c > 0 else -1) for n, c in self.coeffs for _ in range(abs(c))]

    def __str__(self) -> str:
        parts = []
        for i, (n, c) in enumerate(self.coeffs):
            mag = abs(c)
            body = n if mag == 1 else f"{mag}*{n}"
            sep = ("-" if c < 0 else "") if i == 0 else (" - " if c < 0 else " + ")
            parts.append(sep + body)
        return "".join(parts) + f" in {self.bound}"


PairKey = tuple  # (name, name, sign) with name[0] < name[1]


def _normalize_pair(x: str, y: str, sign: int, bound: Interval) -> tuple[PairKey, Interval]:
    if sign not in (1, -1):
        raise InconsistentEnvironment(f"pair sign must be +1 or -1, got {sign}")
    if x == y:
        raise InconsistentEnvironment(f"pair constraint relates {x!r} to itself")
    if x < y:
        return (x, y, sign), bound
    # y + x is symmetric; y - x = -(x - y)
    return (y, x, sign), (bound if sign == 1 else -bound)


@dataclass(frozen=True)
class AbstractEnv:
    """Box bounds per variable name plus optional pair and template facts.

    ``pairs[(x, y, +1)]`` bounds ``x + y``; ``pairs[(x, y, -1)]`` bounds
    ``x - y``.  Keys are normalized so that ``x < y``.
    """

    unary: Mapping[str, Interval]
    pairs: Mapping[PairKey, Interval] = field(default_factory=dict)
    templates: tuple[Template, ...] = ()

    def __post_init__(self) -> None:
        unary = dict(self.unary)
        pairs: dict[PairKey, Interval] = {}
        for (x, y, s), b in dict(self.pairs).items():
            key, b = _normalize_pair(x, y, s, b)
            for n in key[:2]:
                if n not in unary:
                    raise InconsistentEnvironment(f"pair constraint mentions undeclared {n!r}")
            if key in pairs and pairs[key] != b:
                raise InconsistentEnvironment(f"conflicting bounds for pair {key}")
            pairs[key] = b
        for t in self.templates:
            for n, _ in t.coeffs:
                if n not in unary:
                    raise InconsistentEnvironment(f"template mentions undeclared {n!r}")
        object.__setattr__(self, "unary", MappingProxyType(unary))
        object.__setattr__(self, "pairs", MappingProxyType(pairs))
        object.__setattr__(self, "templates", tuple(self.templates))

    def __reduce__(self):
        # mapping proxies do not pickle; rebuild from plain dicts
        return (AbstractEnv, (dict(self.unary), dict(self.pairs), self.templates))

    @classmethod
    def box(cls, **bounds: tuple[int, int]) -> "AbstractEnv":
        return cls({n: Interval(*b) for n, b in bounds.items()})

    def bound(self, name: str) -> Interval:
        try:
            return self.unary[name]
        except KeyError:
            raise UnboundVariable(name) from None

    def pair_bound(self, x: str, y: str, sign: int) -> Interval | None:
        """Bound on ``x + sign*y`` if the environment records one."""
        if x == y:
            return None
        if x < y:
            return self.pairs.get((x, y, sign))
        b = self.pairs.get((y, x, sign))
        if b is None or sign == 1:
            return b
        return -b

    def group_bound(self, items: Sequence[tuple[int, str]]) -> Interval | None:
        """Bound on ``sum(sign * name)`` from pair or template facts, if any.

        Several matching facts are intersected.
        """
        found: list[Interval] = []
        if len(items) == 2 and items[0][1] != items[1][1]:
            (s1, x), (s2, y) = items
            b = self.pair_bound(x, y, s1 * s2)
            if b is not None:
                found.append(b if s1 == 1 else -b)
        want = Counter((n, s) for s, n in items)
        flipped = Counter((n, -s) for s, n in items)
        for t in self.templates:
            counts = t.signed_counts()
            if counts == want:
                found.append(t.bound)
            elif counts == flipped:
                found.append(-t.bound)
        if not found:
            return None
        lo = max(b.lo for b in found)
        hi = min(b.hi for b in found)
        return Interval(lo, hi) if lo <= hi else found[0]

    def without_relations(self) -> "AbstractEnv":
        return AbstractEnv(self.unary)

    def with_pairs(self, extra: Mapping[PairKey, Interval]) -> "AbstractEnv":
        return AbstractEnv(self.unary, {**self.pairs, **extra}, self.templates)

    def satisfied_by(self, state: Mapping[str, int]) -> bool:
        """Membership of a concrete state in the concretization.

        Only facts whose variables are all bound in ``state`` are checked.
        """
        for n, b in self.unary.items():
            if n in state and state[n] not in b:
                return False
        for (x, y, s), b in self.pairs.items():
            if x in state and y in state and state[x] + s * state[y] not in b:
                return False
        for t in self.templates:
            if all(n in state for n, _ in t.coeffs):
                if sum(c * state[n] for n, c in t.coeffs) not in t.bound:
                    return False
        return True

    def __str__(self) -> str:
        lines = [f"{n} in {b}" for n, b in self.unary.items()]
        lines += [f"{x} {'+' if s == 1 else '-'} {y} in {b}" for (x, y, s), b in self.pairs.items()]
        lines += [str(t) for t in self.templates]
        return "{" + ", ".join(lines) + "}"
