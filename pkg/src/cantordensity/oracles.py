"""Set oracles: certified interval answers about localized measures.

An oracle stands for a measurable subset of Cantor space up to null
difference. It answers one question exactly: given a finite word s and
a refinement budget, return a rational interval certain to contain the
localized measure of the set inside the cylinder of s. Budgets are
absolute refinement depths; exact oracles ignore them and answer with
point intervals.

On top of ``local_bounds`` sit traces (bounds along a branch's
prefixes) and a classifier with three verdicts:

* ``converges``     a structural tail certificate confines every deep
                    enough localized measure to a narrow interval
* ``blurry``        the trace's certified bounds witness interleaved
                    high and low excursions, at least two on each side,
                    separated by the reported delta
* ``undetermined``  neither certificate was found within the depth

A blurry verdict certifies finite-depth oscillation; a converges
verdict certifies containment from its start depth on. Upper and lower
density themselves are not computable from oracle queries, so no
stronger claim is ever returned. Tail certificates are cross-checked
against the trace; a contradiction raises instead of classifying.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .branches import Branch, StretchedBranch
from .clopen import ClopenSet
from .dyadics import ONE, ZERO, RatInterval
from .words import Word, is_prefix

Point = Branch | StretchedBranch

DEFAULT_WINDOW = 16
CROSS_CHECK_STEPS = 20


@dataclass(frozen=True)
class TailCertificate:
    """From ``start`` on, every localized measure lies in ``interval``."""

    interval: RatInterval
    start: int


@dataclass(frozen=True)
class Verdict:
    kind: str  # converges | blurry | undetermined
    interval: RatInterval | None = None
    delta: Fraction | None = None
    depth: int = 0
    detail: str = ""


class MeasureOracle:
    """Base class; subclasses implement ``local_bounds``."""

    kind = "oracle"
    exact = False

    def local_bounds(self, word: Word, budget: int) -> RatInterval:
        raise NotImplementedError

    def measure_bounds(self, budget: int = 0) -> RatInterval:
        return self.local_bounds((), budget)

    def trace(self, point: Point, depth: int, window: int = DEFAULT_WINDOW) -> list[RatInterval]:
        return [
            self.local_bounds(point.prefix(n), n + window) for n in range(depth + 1)
        ]

    def tail_certificate(self, point: Point, effort: int) -> TailCertificate | None:
        return None

    def classify(
        self,
        point: Point,
        eps: Fraction = Fraction(1, 256),
        max_depth: int = 80,
        window: int = DEFAULT_WINDOW,
    ) -> Verdict:
        cert = self.tail_certificate(point, max_depth)
        if cert is not None and cert.interval.width <= eps:
            self._cross_check(point, cert, window)
            return Verdict(
                kind="converges",
                interval=cert.interval,
                depth=cert.start,
                detail="tail certificate",
            )
        bounds = self.trace(point, max_depth, window)
        swing = certified_oscillation(bounds)
        if swing is not None:
            delta, low, high = swing
            return Verdict(
                kind="blurry",
                delta=delta,
                interval=RatInterval(low, high),
                depth=max_depth,
                detail="interleaved excursions",
            )
        if cert is not None:
            self._cross_check(point, cert, window)
            return Verdict(
                kind="undetermined",
                interval=cert.interval,
                depth=max_depth,
                detail="tail certificate wider than eps",
            )
        return Verdict(
            kind="undetermined",
            interval=bounds[-1],
            depth=max_depth,
            detail="no certificate within depth",
        )

    def _cross_check(self, point: Point, cert: TailCertificate, window: int) -> None:
        for n in range(cert.start, cert.start + CROSS_CHECK_STEPS):
            probe = self.local_bounds(point.prefix(n), n + window)
            if not probe.intersects(cert.interval):
                raise RuntimeError(
                    f"tail certificate {cert.interval} contradicts certified "
                    f"bounds {probe} at depth {n}"
                )


def certified_oscillation(
    bounds: Sequence[RatInterval],
    max_candidates: int = 40,
) -> tuple[Fraction, Fraction, Fraction] | None:
    """Best certified oscillation in a trace, as (delta, low, high).

    Certified means: there are steps whose whole interval sits above
    ``high`` and steps sitting below ``low``, interleaved with at least
    two excursions per side. Returns the maximal high - low over
    threshold candidates drawn from the trace itself.
    """
    los: list[Fraction] = sorted({b.hi for b in bounds})[:max_candidates]
    his: list[Fraction] = sorted({b.lo for b in bounds}, reverse=True)[:max_candidates]
    best: tuple[Fraction, Fraction, Fraction] | None = None
    for low in los:
        for high in his:
            if high <= low:
                continue
            if best is not None and high - low <= best[0]:
                continue
            if _interleaved(bounds, low, high):
                best = (high - low, low, high)
    return best


def _interleaved(bounds: Sequence[RatInterval], low: Fraction, high: Fraction) -> bool:
    marks = []
    for b in bounds:
        if b.hi <= low:
            mark = "L"
        elif b.lo >= high:
            mark = "H"
        else:
            continue
        if not marks or marks[-1] != mark:
            marks.append(mark)
    # Four full swings between the levels; fewer could be settling noise.
    return len(marks) >= 5


class ClopenOracle(MeasureOracle):
    """Exact oracle of a clopen set; bounds are always points."""

    kind = "clopen"
    exact = True

    def __init__(self, piece: ClopenSet):
        self.piece = piece

    def local_bounds(self, word: Word, budget: int) -> RatInterval:
        return RatInterval.point(self.piece.local_measure(tuple(word)))

    def tail_certificate(self, point: Point, effort: int) -> TailCertificate | None:
        # Once the prefix is as long as the deepest word, the localized
        # set is full or empty and stays that way.
        depth = self.piece.depth
        localized = self.piece.localize(point.prefix(depth))
        value = ONE if localized.is_full() else ZERO
        return TailCertificate(RatInterval.point(value), depth)


class ComplementOracle(MeasureOracle):
    kind = "complement"

    def __init__(self, inner: MeasureOracle):
        self.inner = inner
        self.exact = inner.exact

    def local_bounds(self, word: Word, budget: int) -> RatInterval:
        return self.inner.local_bounds(word, budget).reflect()

    def tail_certificate(self, point: Point, effort: int) -> TailCertificate | None:
        cert = self.inner.tail_certificate(point, effort)
        if cert is None:
            return None
        return TailCertificate(cert.interval.reflect(), cert.start)


class DisjointSumOracle(MeasureOracle):
    """Union of parts the caller guarantees pairwise disjoint."""

    kind = "disjoint-sum"

    def __init__(self, parts: list[MeasureOracle]):
        if not parts:
            raise ValueError("need at least one part")
        self.parts = parts
        self.exact = all(p.exact for p in parts)

    def local_bounds(self, word: Word, budget: int) -> RatInterval:
        total = RatInterval.point(ZERO)
        for part in self.parts:
            total = total + part.local_bounds(word, budget)
        return total

    def tail_certificate(self, point: Point, effort: int) -> TailCertificate | None:
        certs = [p.tail_certificate(point, effort) for p in self.parts]
        if any(c is None for c in certs):
            return None
        start = max(c.start for c in certs)
        interval = RatInterval.point(ZERO)
        for c in certs:
            interval = interval + c.interval
        return TailCertificate(interval, start)


class GraftedUnionOracle(MeasureOracle):
    """Union of copies of sets grafted inside pairwise incomparable cylinders.

    Mass lives only inside the grafts: the localized measure at a word
    off every graft is zero.
    """

    kind = "grafted-union"

    def __init__(self, parts: list[tuple[Word, MeasureOracle]]):
        for i, (a, _) in enumerate(parts):
            for b, _ in parts[i + 1:]:
                if is_prefix(a, b) or is_prefix(b, a):
                    raise ValueError(f"graft words {a} and {b} are comparable")
        self.parts = [(tuple(w), oracle) for w, oracle in parts]
        self.exact = all(o.exact for _, o in parts)

    def max_graft_depth(self) -> int:
        return max((len(w) for w, _ in self.parts), default=0)

    def local_bounds(self, word: Word, budget: int) -> RatInterval:
        word = tuple(word)
        horizon = max(budget, len(word))
        inside = RatInterval.point(ZERO)
        for graft, oracle in self.parts:
            if is_prefix(graft, word):
                return oracle.local_bounds(word[len(graft):], horizon - len(graft))
            if is_prefix(word, graft):
                part = oracle.measure_bounds(horizon - len(graft))
                inside = inside + part.scale(Fraction(1, 1 << (len(graft) - len(word))))
        return inside

    def tail_certificate(self, point: Point, effort: int) -> TailCertificate | None:
        depth = self.max_graft_depth()
        prefix = point.prefix(depth)
        for graft, oracle in self.parts:
            if is_prefix(graft, prefix):
                if not isinstance(point, Branch):
                    return None
                inner = oracle.tail_certificate(point.drop(len(graft)), effort)
                if inner is None:
                    return None
                return TailCertificate(inner.interval, inner.start + len(graft))
        if all(not is_prefix(prefix, graft) for graft, _ in self.parts):
            return TailCertificate(RatInterval.point(ZERO), depth)
        # The point is still a proper prefix of some graft at this depth:
        # it will either enter one or fall off all of them a bit deeper.
        probe = depth
        while probe <= depth + effort:
            probe += 1
            prefix = point.prefix(probe)
            on_spine = [g for g, _ in self.parts if is_prefix(prefix, g)]
            hit = [g for g, _ in self.parts if is_prefix(g, prefix)]
            if hit:
                return self.tail_certificate_from(point, hit[0], effort)
            if not on_spine:
                return TailCertificate(RatInterval.point(ZERO), probe)
        return None

    def tail_certificate_from(self, point: Point, graft: Word, effort: int) -> TailCertificate | None:
        for g, oracle in self.parts:
            if g == graft:
                if not isinstance(point, Branch):
                    return None
                inner = oracle.tail_certificate(point.drop(len(g)), effort)
                if inner is None:
                    return None
                return TailCertificate(inner.interval, inner.start + len(g))
        return None


class SpinePrefixOracle(MeasureOracle):
    """The union over m of 0^m 1 ^ piece, one copy behind every zero run.

    Its localized measure along the zero spine is the piece's measure
    at every single depth: the grafted copies below 0^m contribute the
    geometric series sum 2^m * sum_{j >= m} 2^-(j+1) * r = r exactly.
    """

    kind = "spine-prefix"

    def __init__(self, piece: MeasureOracle, piece_measure: Fraction):
        self.piece = piece
        self.rate = piece_measure
        self.exact = piece.exact

    def local_bounds(self, word: Word, budget: int) -> RatInterval:
        word = tuple(word)
        zeros = 0
        while zeros < len(word) and word[zeros] == 0:
            zeros += 1
        if zeros == len(word):
            return RatInterval.point(self.rate)
        rest = word[zeros + 1:]
        horizon = max(budget, len(word))
        return self.piece.local_bounds(rest, horizon - zeros - 1)

    def tail_certificate(self, point: Point, effort: int) -> TailCertificate | None:
        if not isinstance(point, Branch):
            return None
        if point.constant_tail() == (0, 0):
            # The all-zeros point rides the spine forever.
            return TailCertificate(RatInterval.point(self.rate), 0)
        # Any other point leaves the spine at its first 1.
        first_one = 0
        while point.at(first_one) == 0:
            first_one += 1
        inner = self.piece.tail_certificate(point.drop(first_one + 1), effort)
        if inner is None:
            return None
        return TailCertificate(inner.interval, inner.start + first_one + 1)


def from_clopen(piece: ClopenSet) -> ClopenOracle:
    """Exact oracle of a clopen set; bounds are points at every budget."""
    return ClopenOracle(piece)


def compose(
    parts: Sequence[tuple[Word, MeasureOracle]], complemented: bool = False
) -> MeasureOracle:
    """Union of parts grafted behind pairwise incomparable words.

    Optionally complemented. Comparable graft words are rejected, so
    the parts' localized measures always add exactly.
    """
    oracle: MeasureOracle = GraftedUnionOracle(list(parts))
    if complemented:
        oracle = ComplementOracle(oracle)
    return oracle
