"""Exact rational arithmetic helpers: dyadics, 4-ary digit streams, intervals.

Everything in the package computes with ``fractions.Fraction``; floats never
appear. The dyadic rationals strictly between 0 and 1 carry a rank order
(coarser denominator first, then numerator) used whenever a construction
asks for a canonical dyadic inside an interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def is_dyadic(q: Fraction) -> bool:
    """True when the reduced denominator is a power of two."""
    d = q.denominator
    return d & (d - 1) == 0


def dyadic_exponent(q: Fraction) -> int:
    """Least n with q * 2^n an integer. Requires a dyadic argument."""
    if not is_dyadic(q):
        raise ValueError(f"not dyadic: {q}")
    return q.denominator.bit_length() - 1


def dyadic_rank(q: Fraction) -> int:
    """Position of a dyadic in (0,1) in the (exponent, numerator) order.

    1/2 has rank 0, then 1/4, 3/4, 1/8, 3/8, 5/8, 7/8, ...
    """
    if not (ZERO < q < ONE) or not is_dyadic(q):
        raise ValueError(f"not a dyadic in (0,1): {q}")
    n = dyadic_exponent(q)
    # 2^(n-1) - 1 dyadics have a coarser denominator; q's numerator is odd.
    return (1 << (n - 1)) - 1 + (q.numerator - 1) // 2


def dyadic_of_rank(rank: int) -> Fraction:
    if rank < 0:
        raise ValueError("rank must be non-negative")
    n = 1
    while rank >= (1 << (n - 1)):
        rank -= 1 << (n - 1)
        n += 1
    return Fraction(2 * rank + 1, 1 << n)


# The rank function doubles as the well-ordering of the dyadics of the
# open unit interval; callers that think of it that way use this name.
dyadic_rank_order = dyadic_rank


def least_dyadic_in(lo: Fraction, hi: Fraction) -> Fraction:
    """Rank-least dyadic of (0,1) inside the open interval (lo, hi).

    The endpoints may stick out of the unit interval; the search is over
    dyadics strictly between 0 and 1. Raises when the clipped interval
    is empty.
    """
    lo = max(lo, ZERO)
    hi = min(hi, ONE)
    if lo >= hi:
        raise ValueError(f"no dyadic in empty interval ({lo}, {hi})")
    n = 1
    while True:
        scale = 1 << n
        # lo >= 0 here, so int() is floor; floor+1 is the least strict bound.
        first = int(lo * scale) + 1
        if first % 2 == 0:
            first += 1
        candidate = Fraction(first, scale)
        if candidate < hi:
            return candidate
        n += 1


def four_ary_digits(value: Fraction, count: int) -> tuple[int, ...]:
    """First ``count`` digits of the greedy base-4 expansion of a value in [0,1).

    Greedy means the terminating expansion is produced whenever one
    exists (the digit stream of 1/4 starts 1, 0, 0, not 0, 3, 3).
    """
    if not (ZERO <= value < ONE):
        raise ValueError(f"value must be in [0,1): {value}")
    digits = []
    x = value
    for _ in range(count):
        x *= 4
        d = int(x)
        digits.append(d)
        x -= d
    return tuple(digits)


def four_ary_expansion(value: Fraction) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Full eventually-periodic base-4 expansion as (preperiod, cycle).

    A terminating expansion comes back with cycle (0,). The remainders
    repeat within ``denominator`` steps, so this always halts.
    """
    if not (ZERO <= value < ONE):
        raise ValueError(f"value must be in [0,1): {value}")
    seen: dict[Fraction, int] = {}
    digits: list[int] = []
    x = value
    while x not in seen:
        seen[x] = len(digits)
        x *= 4
        d = int(x)
        digits.append(d)
        x -= d
    start = seen[x]
    return tuple(digits[:start]), tuple(digits[start:])


def geometric_tail(pre: tuple[Fraction, ...], cycle: tuple[Fraction, ...],
                   start: int, ratio: Fraction) -> Fraction:
    """Exact sum of a_n * ratio^n for n >= start.

    The coefficient stream is a_1, a_2, ... given by ``pre`` followed by
    ``cycle`` repeated forever (1-indexed: a_1 = pre[0] when pre is
    non-empty). ``start`` must be at least 1.
    """
    if start < 1:
        raise ValueError("start must be at least 1")
    if not cycle:
        raise ValueError("cycle must be non-empty")
    total = ZERO
    # Finite stub up to the point where the stream is purely periodic.
    stub_end = max(start, len(pre) + 1)
    for n in range(start, stub_end):
        total += _stream_at(pre, cycle, n) * ratio**n
    # From stub_end on, the stream repeats with period len(cycle).
    p = len(cycle)
    block = ZERO
    for i in range(p):
        block += _stream_at(pre, cycle, stub_end + i) * ratio ** (stub_end + i)
    total += block / (1 - ratio**p)
    return total


def _stream_at(pre: tuple[Fraction, ...], cycle: tuple[Fraction, ...], n: int) -> Fraction:
    """1-indexed coefficient stream lookup."""
    if n <= len(pre):
        return pre[n - 1]
    return cycle[(n - len(pre) - 1) % len(cycle)]


@dataclass(frozen=True)
class RatInterval:
    """Closed interval with rational endpoints; the workhorse bound type."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(value: Fraction) -> "RatInterval":
        return RatInterval(value, value)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, value: Fraction) -> bool:
        return self.lo <= value <= self.hi

    def contains_interval(self, other: "RatInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: "RatInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: "RatInterval") -> "RatInterval":
        if not self.intersects(other):
            raise ValueError(f"disjoint intervals {self} and {other}")
        return RatInterval(max(self.lo, other.lo), min(self.hi, other.hi))

    def hull(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __add__(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(self.lo + other.lo, self.hi + other.hi)

    def scale(self, factor: Fraction) -> "RatInterval":
        if factor < 0:
            return RatInterval(self.hi * factor, self.lo * factor)
        return RatInterval(self.lo * factor, self.hi * factor)

    def shift(self, offset: Fraction) -> "RatInterval":
        return RatInterval(self.lo + offset, self.hi + offset)

    def reflect(self) -> "RatInterval":
        """The interval of 1 - x for x in self."""
        return RatInterval(1 - self.hi, 1 - self.lo)

    def clamp_unit(self) -> "RatInterval":
        return RatInterval(max(self.lo, ZERO), min(self.hi, ONE))

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


UNIT = RatInterval(ZERO, ONE)
EMPTY_MASS = RatInterval.point(ZERO)
FULL_MASS = RatInterval.point(ONE)


def parse_fraction(text: str) -> Fraction:
    """Parse "p/q", an integer, or an exact decimal literal."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)
