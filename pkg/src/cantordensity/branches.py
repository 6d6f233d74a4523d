"""Points of Cantor space presented with decidable tails.

Two presentations: an eventually periodic letter stream, and the
stretched image of such a stream (the i-th letter repeated i+1 times).
Both answer ``at``/``prefix`` exactly at every position, and both
expose enough structure for the oracles to certify tail behavior.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from .words import Word, interleave, order_at_depth, stretch_prefix, triangular


@dataclass(frozen=True)
class Branch:
    """The point head + cycle + cycle + ... (cycle non-empty)."""

    head: Word
    cycle: Word

    def __post_init__(self) -> None:
        if not self.cycle:
            raise ValueError("cycle must be non-empty")

    def at(self, n: int) -> int:
        if n < len(self.head):
            return self.head[n]
        return self.cycle[(n - len(self.head)) % len(self.cycle)]

    def prefix(self, n: int) -> Word:
        return tuple(self.at(i) for i in range(n))

    def has_infinitely_many_ones(self) -> bool:
        return any(letter == 1 for letter in self.cycle)

    def constant_tail(self) -> tuple[int, int] | None:
        """(letter, start) when the branch is that letter from start on."""
        first = self.cycle[0]
        if any(letter != first for letter in self.cycle):
            return None
        start = len(self.head)
        while start > 0 and self.head[start - 1] == first:
            start -= 1
        return first, start

    def letters(self):
        n = 0
        while True:
            yield self.at(n)
            n += 1

    def drop(self, count: int) -> "Branch":
        """The branch with its first ``count`` letters removed."""
        if count <= len(self.head):
            return Branch(self.head[count:], self.cycle)
        shift = (count - len(self.head)) % len(self.cycle)
        return Branch((), self.cycle[shift:] + self.cycle[:shift])

    @staticmethod
    def zeros() -> "Branch":
        return Branch((), (0,))

    @staticmethod
    def ones() -> "Branch":
        return Branch((), (1,))


@dataclass(frozen=True)
class StretchedBranch:
    """The stretched image of a base stream: letter i repeated i+1 times."""

    base: Branch

    def at(self, n: int) -> int:
        # Position n lies in block k exactly when triangular(k) <= n.
        return self.base.at(order_at_depth(n))

    def prefix(self, n: int) -> Word:
        return stretch_prefix(self.base.letters(), n)

    def order_word(self, k: int) -> Word:
        return self.base.prefix(k)


def bit_at(point: "Branch | StretchedBranch", n: int) -> int:
    """The n-th letter of the denoted infinite sequence."""
    return point.at(n)


def interleave_branches(x: Branch, y: Branch) -> Branch:
    """The stream alternating the two inputs, ``x`` on even positions.

    Eventually periodic again: past both heads one combined period
    covers the lcm of the two cycle lengths.
    """
    m = max(len(x.head), len(y.head))
    span = lcm(len(x.cycle), len(y.cycle))
    head = interleave(x.prefix(m), y.prefix(m))
    cycle = interleave(
        tuple(x.at(m + i) for i in range(span)),
        tuple(y.at(m + i) for i in range(span)),
    )
    return Branch(head, cycle)


def as_stretched(point: "Branch | StretchedBranch") -> Branch | None:
    """The base stream when the point is a stretched image, else None.

    A stretched point has every block of letters n with
    triangular(k) <= n < triangular(k+1) constant. For an eventually
    periodic point with a non-constant cycle some block eventually
    straddles two different letters, so only constant-tailed points
    unstretch; the check is exact.
    """
    if isinstance(point, StretchedBranch):
        return point.base
    tail = point.constant_tail()
    if tail is None:
        return None
    letter, start = tail
    base_letters = []
    k = 0
    while triangular(k) < start:
        block = [point.at(n) for n in range(triangular(k), min(triangular(k + 1), start))]
        if any(b != block[0] for b in block):
            return None
        # A block cut by ``start`` continues with the constant letter.
        if triangular(k + 1) > start and block[0] != letter:
            return None
        base_letters.append(block[0])
        k += 1
    return Branch(tuple(base_letters), (letter,))
