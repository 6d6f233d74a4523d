"""Clopen subsets of Cantor space with exact rational measure.

A clopen set is a finite union of basic cylinders. The canonical form
kept here is the unique minimal antichain of binary words covering the
set: no word extends another and no two sibling words are both present
(siblings merge into their parent). Two clopen sets are equal exactly
when they hold the same points, and the dataclass equality on the
canonical form coincides with that.

The whole algebra runs on one recursion scheme: split a set into its
two halves below letter 0 and letter 1, work on the halves, graft the
results back together. Every operation is exact; measures are
Fractions with power-of-two denominators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .words import Word, is_prefix

_FULL_WORDS: tuple[Word, ...] = ((),)


@dataclass(frozen=True)
class ClopenSet:
    words: tuple[Word, ...]

    @staticmethod
    def from_words(generators: tuple[Word, ...] | list[Word]) -> "ClopenSet":
        """Build the set covered by arbitrary cylinder words, canonicalized."""
        return ClopenSet(_normalize(tuple(generators)))

    @staticmethod
    def empty() -> "ClopenSet":
        return ClopenSet(())

    @staticmethod
    def full() -> "ClopenSet":
        return ClopenSet(_FULL_WORDS)

    @staticmethod
    def cylinder(word: Word) -> "ClopenSet":
        return ClopenSet((tuple(word),))

    def is_empty(self) -> bool:
        return not self.words

    def is_full(self) -> bool:
        return self.words == _FULL_WORDS

    @property
    def depth(self) -> int:
        """Length of the longest word in the canonical antichain."""
        return max((len(w) for w in self.words), default=0)

    def measure(self) -> Fraction:
        return sum((Fraction(1, 1 << len(w)) for w in self.words), Fraction(0))

    def halves(self) -> tuple["ClopenSet", "ClopenSet"]:
        """The localizations below letter 0 and letter 1."""
        if self.is_full():
            return self, self
        left = []
        right = []
        for w in self.words:
            (left if w[0] == 0 else right).append(w[1:])
        return ClopenSet(_normalize(tuple(left))), ClopenSet(_normalize(tuple(right)))

    def localize(self, word: Word) -> "ClopenSet":
        """The set seen from inside the cylinder of ``word``.

        A point x is in the result exactly when word + x is in self, so
        the result's measure is the localized measure of self at word.
        """
        current = self
        for letter in word:
            if letter not in (0, 1):
                raise ValueError(f"not a binary word: {word}")
            current = current.halves()[letter]
        return current

    def local_measure(self, word: Word) -> Fraction:
        return self.localize(word).measure()

    def contains_point_prefix(self, word: Word) -> bool:
        """True when the cylinder of ``word`` lies entirely inside the set."""
        return self.localize(word).is_full()

    def union(self, other: "ClopenSet") -> "ClopenSet":
        return ClopenSet.from_words(self.words + other.words)

    def complement(self) -> "ClopenSet":
        if self.is_empty():
            return ClopenSet.full()
        if self.is_full():
            return ClopenSet.empty()
        left, right = self.halves()
        return _graft(left.complement(), right.complement())

    def intersect(self, other: "ClopenSet") -> "ClopenSet":
        if self.is_empty() or other.is_full():
            return self
        if self.is_full() or other.is_empty():
            return other
        a0, a1 = self.halves()
        b0, b1 = other.halves()
        return _graft(a0.intersect(b0), a1.intersect(b1))

    def difference(self, other: "ClopenSet") -> "ClopenSet":
        return self.intersect(other.complement())

    def includes(self, other: "ClopenSet") -> bool:
        return self.intersect(other) == other

    def shift_into(self, word: Word) -> "ClopenSet":
        """The copy of the set living inside the cylinder of ``word``."""
        if self.is_empty():
            return self
        return ClopenSet(tuple(tuple(word) + w for w in self.words))

    def take_submass(self, amount: Fraction) -> "ClopenSet":
        """Lexicographically first clopen subset with exact measure ``amount``.

        The amount must be dyadic and at most the measure; greed runs
        left to right, always keeping as much of the 0-side as fits.
        The recursion never materializes cylinder lists, so fine
        dyadics are cheap even inside coarse sets.
        """
        if amount < 0 or amount > self.measure():
            raise ValueError(f"no subset of measure {amount} in a set of measure {self.measure()}")
        if (amount.denominator & (amount.denominator - 1)) != 0:
            raise ValueError(f"subset mass must be dyadic: {amount}")
        return self._take(amount)

    def _take(self, amount: Fraction) -> "ClopenSet":
        if amount == 0:
            return ClopenSet.empty()
        if amount == self.measure():
            return self
        left, right = self.halves()
        left_cap = left.measure() / 2
        from_left = min(amount, left_cap)
        from_right = amount - from_left
        return _graft(left._take(from_left * 2), right._take(from_right * 2))

    def __str__(self) -> str:
        if self.is_full():
            return "{<>}"
        inner = ", ".join("".join(map(str, w)) for w in self.words)
        return "{" + inner + "}"


def _graft(left: ClopenSet, right: ClopenSet) -> ClopenSet:
    if left.is_full() and right.is_full():
        return ClopenSet.full()
    words = tuple((0,) + w for w in left.words) + tuple((1,) + w for w in right.words)
    return ClopenSet(words)


def _normalize(generators: tuple[Word, ...]) -> tuple[Word, ...]:
    if not generators:
        return ()
    if any(len(w) == 0 for w in generators):
        return _FULL_WORDS
    left = tuple(w[1:] for w in generators if w[0] == 0)
    right = tuple(w[1:] for w in generators if w[0] == 1)
    lnorm = _normalize(left)
    rnorm = _normalize(right)
    if lnorm == _FULL_WORDS and rnorm == _FULL_WORDS:
        return _FULL_WORDS
    return tuple((0,) + w for w in lnorm) + tuple((1,) + w for w in rnorm)


def union_all(parts: list[ClopenSet]) -> ClopenSet:
    return reduce(ClopenSet.union, parts, ClopenSet.empty())


def piece_of_measure(amount: Fraction) -> ClopenSet:
    """The canonical clopen set of a prescribed dyadic measure in [0, 1].

    Greedy and lexicographically first: measure 1/2 is the cylinder of
    (0,), measure 3/4 is {(0,), (1,0)}, measure 1/4 is {(0,0)}.
    """
    if not (0 <= amount <= 1):
        raise ValueError(f"measure out of range: {amount}")
    return ClopenSet.full().take_submass(amount)


def overlap_word(a: Word, b: Word) -> Word | None:
    """The deeper of two comparable words, or None when incomparable."""
    if is_prefix(a, b):
        return b
    if is_prefix(b, a):
        return a
    return None


# The canonical set of a prescribed measure is the lex-first greedy
# piece; this name states the contract rather than the algorithm.
canonical_of_measure = piece_of_measure


def subset_of_measure(container: ClopenSet, amount: Fraction) -> ClopenSet:
    """Lex-first clopen subset of ``container`` with exact dyadic measure.

    Strict about the range: the amount must sit strictly between zero
    and the container's measure, so the result is a proper nonempty
    subset.
    """
    if not (0 < amount < container.measure()):
        raise ValueError(
            f"need 0 < amount < {container.measure()}, got {amount}"
        )
    return container.take_submass(amount)
