"""Sets of prescribed measure whose density behavior is controlled everywhere.

The raw material is a pair of complementary cylinder families splitting
Cantor space (up to the single all-zeros point):

* behind each word 0^n 1^n (n >= 1) sits one third of the space,
* behind the words 0^n 1^m 0 (n > m > 0) together with the word (1,)
  sit the remaining two thirds.

Scaling pieces grafted behind the first family yields a set of any
prescribed measure r <= 1/3 whose localized measures along every branch
stay controlled: the piece behind 0^n 1^n has measure f(n), where f is
read off the base-4 digits of r. Larger measures take a clopen chunk
carved from the second family plus such a remainder set.

All oracles in this module are exact: localized measures come out as
point intervals at every budget, through closed-form digit and
geometric-series arithmetic rather than enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .branches import Branch, StretchedBranch
from .clopen import ClopenSet, piece_of_measure
from .dyadics import ONE, ZERO, RatInterval, is_dyadic, least_dyadic_in
from .oracles import (
    ClopenOracle,
    ComplementOracle,
    DisjointSumOracle,
    GraftedUnionOracle,
    MeasureOracle,
    SpinePrefixOracle,
    TailCertificate,
)
from .words import Word

THIRD = Fraction(1, 3)
TWO_THIRDS = Fraction(2, 3)


def first_family_word(n: int) -> Word:
    """0^n 1^n, the n-th graft site (n >= 1)."""
    if n < 1:
        raise ValueError("graft sites are indexed from 1")
    return (0,) * n + (1,) * n


def second_family_words(max_length: int) -> list[Word]:
    """All words 0^n 1^m 0 (n > m > 0) up to the length bound, plus (1,)."""
    out: list[Word] = [(1,)]
    for n in range(2, max_length):
        for m in range(1, n):
            word = (0,) * n + (1,) * m + (0,)
            if len(word) <= max_length:
                out.append(word)
    return out


def first_family_oracle() -> MeasureOracle:
    """The union behind all words 0^n 1^n; measure exactly 1/3."""
    return SpongyMeasureOracle(THIRD)


def second_family_oracle() -> MeasureOracle:
    """The union behind the complementary family; measure exactly 2/3.

    Its union is the complement of the first family's union minus the
    single point 0^infinity, so the complement oracle is exact up to
    null difference.
    """
    return ComplementOracle(first_family_oracle())


class SpongyMeasureOracle(MeasureOracle):
    """The set union over n >= 1 of 0^n 1^n ^ D(f(n)), measure r <= 1/3.

    f comes from the greedy base-4 digits d_1 d_2 ... of r: writing h
    for the first position with digit 0 (which exists for r < 1/3),
    f(n) = 1 for n < h and f(n) = d_(n+1)/4 from h on. At r = 1/3 the
    digits are all 1 and f is constantly 1. Tail sums collapse to
    digit-prefix arithmetic, so every localized measure is a closed
    form; nothing depends on the digit cycle length.
    """

    kind = "spongy-measure"
    exact = True

    def __init__(self, measure: Fraction):
        if not (ZERO <= measure <= THIRD):
            raise ValueError(f"measure must be in [0, 1/3]: {measure}")
        self.measure = measure
        self.h = None if measure == THIRD else self._first_zero_digit()

    def _digit(self, j: int) -> int:
        scaled = self.measure * (4**j)
        return int(scaled) - 4 * int(scaled / 4)

    def _first_zero_digit(self) -> int:
        j = 1
        while True:
            d = self._digit(j)
            if d == 0:
                return j
            if d != 1:
                raise AssertionError("digits of a value below 1/3 are 1s before the first 0")
            j += 1

    def piece_measure(self, n: int) -> Fraction:
        """f(n), the measure of the piece behind 0^n 1^n."""
        if n < 1:
            raise ValueError("pieces are indexed from 1")
        if self.h is None or n < self.h:
            return ONE
        return Fraction(self._digit(n + 1), 4)

    def tail_sum(self, m: int) -> Fraction:
        """Sum over n >= m of f(n) 4^-n, exactly (m >= 1)."""
        if m < 1:
            raise ValueError("the series starts at n = 1")
        if self.h is None:
            return Fraction(4, 3) * Fraction(1, 4**m)
        start = max(m, self.h)
        # Digits from position start+1 on are the base-4 tail of r.
        tail = self.measure - Fraction(int(self.measure * 4**start), 4**start)
        if m < self.h:
            tail += (Fraction(4, 4**m) - Fraction(4, 4**self.h)) / 3
        return tail

    def local_bounds(self, word: Word, budget: int) -> RatInterval:
        return RatInterval.point(self.local_measure(tuple(word)))

    def local_measure(self, word: Word) -> Fraction:
        zeros = 0
        while zeros < len(word) and word[zeros] == 0:
            zeros += 1
        if zeros == len(word):
            return (1 << zeros) * self.tail_sum(max(zeros, 1))
        if zeros == 0:
            return ZERO
        # The word reads 0^zeros 1 rest; only the graft at n = zeros
        # can meet this cylinder, behind the remaining 1s.
        n = zeros
        rest = word[zeros + 1:]
        ones_needed = n - 1
        lead = rest[: min(len(rest), ones_needed)]
        if any(l != 1 for l in lead):
            return ZERO
        if len(rest) <= ones_needed:
            # Still on the way into the graft site.
            return self.piece_measure(n) * Fraction(1 << len(word), 1 << (2 * n))
        piece = piece_of_measure(self.piece_measure(n))
        return piece.local_measure(rest[ones_needed:])

    def tail_certificate(self, point, effort: int) -> TailCertificate | None:
        if isinstance(point, StretchedBranch):
            return None
        probe = point
        if probe.constant_tail() == (0, 0):
            start = max(1, effort - 20)
            bound = Fraction(4, 3) * Fraction(1, 1 << start)
            return TailCertificate(RatInterval(ZERO, min(bound, ONE)), start)
        first_one = 0
        while probe.at(first_one) == 0:
            first_one += 1
        n = first_one
        if n == 0:
            return TailCertificate(RatInterval.point(ZERO), 1)
        for j in range(n + 1, 2 * n):
            if probe.at(j) != 1:
                return TailCertificate(RatInterval.point(ZERO), j + 1)
        piece = piece_of_measure(self.piece_measure(n))
        inner = ClopenOracle(piece).tail_certificate(probe.drop(2 * n), effort)
        assert inner is not None
        return TailCertificate(inner.interval, inner.start + 2 * n)


def dualistic_w_f(r: Fraction) -> SpongyMeasureOracle:
    """Oracle of the graft-series set of exact measure r, r in (0; 1/3].

    The whole set hangs off the zero spine, so its localized measure at
    0^m is at most (4/3) * 2^-m and the density at the all-zeros point
    is zero.
    """
    if not (ZERO < r <= THIRD):
        raise ValueError(f"measure must be in (0; 1/3]: {r}")
    return SpongyMeasureOracle(r)


@dataclass(frozen=True)
class DualisticSet:
    """A set of prescribed measure: a clopen chunk plus a spongy remainder."""

    measure: Fraction
    clopen_part: ClopenSet | None
    spongy_rate: Fraction
    oracle: MeasureOracle = field(compare=False)
    compliant: bool = True


def dualistic_of_measure(r: Fraction) -> DualisticSet:
    """A set of exact measure r in (0;1) with blurry points everywhere it can.

    For r <= 1/3 the graft construction applies directly. Beyond that a
    dyadic chunk d is carved from the complementary cylinder family
    (which supports clopen subsets of any dyadic measure below 2/3) and
    the remainder r - d < 1/3 is built by grafting; the two parts live
    behind incomparable words, so measures add exactly.
    """
    if not (ZERO < r < ONE):
        raise ValueError(f"measure must be in (0;1): {r}")
    if r <= THIRD:
        return DualisticSet(
            measure=r,
            clopen_part=None,
            spongy_rate=r,
            oracle=SpongyMeasureOracle(r),
        )
    d = least_dyadic_in(r - THIRD, min(r, TWO_THIRDS))
    chunk = _second_family_chunk(d)
    remainder = r - d
    oracle = DisjointSumOracle([ClopenOracle(chunk), SpongyMeasureOracle(remainder)])
    return DualisticSet(
        measure=r,
        clopen_part=chunk,
        spongy_rate=remainder,
        oracle=oracle,
    )


def _second_family_chunk(d: Fraction) -> ClopenSet:
    """The first clopen subset of the complementary family with measure d."""
    if not is_dyadic(d) or not (ZERO < d < TWO_THIRDS):
        raise ValueError(f"chunk measure must be a dyadic in (0, 2/3): {d}")
    length = 3
    while True:
        superset = ClopenSet.from_words(second_family_words(length))
        if superset.measure() > d:
            return superset.take_submass(d)
        length += 2


@dataclass(frozen=True)
class SolidCountableRange:
    """A set whose density values on a designated sequence realize a list.

    Behind each word 0^n 1^n hangs a spine construction with constant
    localized measure value_n, so the point 0^n 1^n 0^infinity has
    density exactly value_n; the all-zeros point has density 0. The
    builder rejects duplicate values, and ``audit`` re-checks that the
    designated points and their values both stay pairwise distinct.
    """

    values: tuple[Fraction, ...]
    oracle: MeasureOracle = field(compare=False)

    def designated_points(self) -> list[tuple[Branch, Fraction]]:
        return [
            (Branch(first_family_word(n + 1), (0,)), value)
            for n, value in enumerate(self.values)
        ]

    def spine_point(self) -> Branch:
        return Branch.zeros()

    def audit(self) -> bool:
        """Distinct values at distinct designated points."""
        if len(set(self.values)) != len(self.values):
            return False
        points = [p.head for p, _ in self.designated_points()]
        return len(set(points)) == len(points)

    def measure(self) -> Fraction:
        return self.oracle.measure_bounds().lo


def solid_countable_range(values: list[Fraction]) -> SolidCountableRange:
    """A solid set realizing the given density values on designated points.

    An empty list yields a proper nonempty clopen set (solid, nothing
    designated). Values must lie strictly between 0 and 1.
    """
    for v in values:
        if not (ZERO < v < ONE):
            raise ValueError(f"density values must be in (0;1): {v}")
    if len(set(values)) != len(values):
        raise ValueError("density values must be pairwise distinct")
    if not values:
        return SolidCountableRange((), ClopenOracle(piece_of_measure(Fraction(1, 2))))
    parts: list[tuple[Word, MeasureOracle]] = []
    for n, value in enumerate(values, start=1):
        parts.append((first_family_word(n), SpinePrefixOracle(_exact_piece(value), value)))
    return SolidCountableRange(tuple(values), GraftedUnionOracle(parts))


def _exact_piece(value: Fraction) -> MeasureOracle:
    """An exact oracle of a set with the exact given measure."""
    if is_dyadic(value):
        return ClopenOracle(piece_of_measure(value))
    return dualistic_of_measure(value).oracle
