"""Canonical dyadic approximations of presented continuous functions.

A presentation of a continuous function assigns to every finite word an
open rational interval containing the function's values on the cylinder
behind that word, nested along extensions and shrinking along branches.
The canonical approximation picks at each node the dyadic of least rank
inside the presented interval. Rank order makes the choice canonical:
two nodes with overlapping presentations tend to agree, and sibling
jumps are controlled by the parent's interval width.

Nodes may carry arbitrary natural-number letters; binary words are the
special case used when the function lives on Cantor space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Protocol

from .branches import Branch
from .dyadics import least_dyadic_in
from .words import Word, runs_to_bits


class FunctionPresentation(Protocol):
    """Open rational enclosures of a continuous function, node by node."""

    kind: str

    def presented_interval(self, node: Word) -> tuple[Fraction, Fraction]:
        """Open interval (lo; hi) containing every value on the cylinder."""
        ...

    def value(self, point: Branch) -> Fraction | None:
        """Exact value at an eventually periodic point, when computable."""
        ...


def canonical_approx(presentation: FunctionPresentation, node: Word) -> Fraction:
    """The dyadic of least rank inside the presented interval at a node."""
    lo, hi = presentation.presented_interval(node)
    return least_dyadic_in(lo, hi)


def approx_pair(presentation: FunctionPresentation, node: Word) -> tuple[Fraction, Fraction]:
    """Dyadics strictly below and above the canonical value at a node.

    The offsets shrink with depth, and ends poking out of (0;1) fold
    back to the midpoint toward the nearer boundary, so both members
    stay strictly inside (0;1) and the gap stays below 2^-|node|.
    """
    middle = canonical_approx(presentation, node)
    offset = Fraction(1, 2 ** (len(node) + 2))
    below = middle - offset
    above = middle + offset
    if below <= 0:
        below = middle / 2
    if above >= 1:
        above = (1 + middle) / 2
    return below, above


@dataclass(frozen=True)
class ConstantPresentation:
    """The constant function at a rational in (0;1)."""

    constant: Fraction
    kind = "constant"

    def __post_init__(self) -> None:
        if not (0 < self.constant < 1):
            raise ValueError(f"constant must be in (0;1): {self.constant}")

    def presented_interval(self, node: Word) -> tuple[Fraction, Fraction]:
        half = Fraction(1, 2 ** (len(node) + 1))
        return self.constant - half, self.constant + half

    def value(self, point: Branch) -> Fraction:
        return self.constant


def _bit_sum(bits: Word) -> Fraction:
    return sum((Fraction(b, 2 ** (n + 1)) for n, b in enumerate(bits)), Fraction(0))


def _branch_bit_value(head: Word, cycle: Word) -> Fraction:
    """Sum of bit(n) 2^-(n+1) over an eventually periodic bit stream."""
    cycle_sum = _bit_sum(cycle)
    tail = cycle_sum / (1 - Fraction(1, 2 ** len(cycle)))
    return _bit_sum(head) + tail / 2 ** len(head)


@dataclass(frozen=True)
class AffineImagePresentation:
    """Letters' parities read as binary digits, mapped onto (lo; hi).

    The value at a stream x is lo + (hi - lo) sum of parity(x(n)) 2^-(n+1).
    Cylinder images are closed intervals; the presented open intervals
    widen them by a quarter of the remaining slack, keeping sibling
    values strictly within the parent scale.
    """

    lo_value: Fraction
    hi_value: Fraction
    kind = "affine-image"

    def __post_init__(self) -> None:
        if not (0 < self.lo_value < self.hi_value < 1):
            raise ValueError("need 0 < lo < hi < 1")

    @property
    def span(self) -> Fraction:
        return self.hi_value - self.lo_value

    def presented_interval(self, node: Word) -> tuple[Fraction, Fraction]:
        depth = len(node)
        base = self.lo_value + self.span * _bit_sum(tuple(letter % 2 for letter in node))
        hull_width = self.span / 2**depth
        slack = (1 - self.span) / 2 ** (depth + 2)
        return base - slack, base + hull_width + slack

    def value(self, point: Branch) -> Fraction:
        head = tuple(letter % 2 for letter in point.head)
        cycle = tuple(letter % 2 for letter in point.cycle)
        return self.lo_value + self.span * _branch_bit_value(head, cycle)


@dataclass(frozen=True)
class InjectivePresentation:
    """An injective function through the run encoding of the input.

    The input stream's letters become runs of zeros separated by ones;
    the resulting bit stream, which always carries infinitely many
    ones, is read as a binary value and squeezed into
    (margin; 1 - margin). Run encoding makes the map injective and the
    closed cylinder hulls lose their unreachable left endpoint, so a
    margin-scaled widening keeps the presentation strictly narrower
    than the node scale.
    """

    margin: Fraction
    kind = "injective"

    def __post_init__(self) -> None:
        if not (0 < self.margin < Fraction(1, 2)):
            raise ValueError(f"margin must be in (0; 1/2): {self.margin}")

    def presented_interval(self, node: Word) -> tuple[Fraction, Fraction]:
        image = runs_to_bits(node)
        squeeze = 1 - 2 * self.margin
        base = self.margin + squeeze * _bit_sum(image)
        hull_width = squeeze / 2 ** len(image)
        pad = self.margin / 2 ** (len(image) + 1)
        return base - pad, base + hull_width + pad

    def value(self, point: Branch) -> Fraction:
        head = runs_to_bits(point.head)
        cycle = runs_to_bits(point.cycle)
        squeeze = 1 - 2 * self.margin
        return self.margin + squeeze * _branch_bit_value(head, cycle)


class ReparamPresentation:
    """A presentation precomposed with letter padding until it shrinks.

    Each node is mapped into the base presentation's tree, appending
    zero letters until the presented interval is narrower than the node
    scale. The result presents the base function reparametrized along
    the padded embedding, with intervals narrower than 2^-depth at
    every depth.
    """

    kind = "reparam"

    def __init__(self, base: FunctionPresentation, max_pad: int = 64):
        self.base = base
        self.max_pad = max_pad
        self._images: dict[Word, Word] = {}

    def _pad(self, node: Word, bound: Fraction) -> Word:
        current = node
        for _ in range(self.max_pad):
            lo, hi = self.base.presented_interval(current)
            if hi - lo < bound:
                return current
            current = current + (0,)
        raise ValueError(
            f"presented intervals do not shrink below {bound} behind node {node}"
        )

    def _image(self, node: Word) -> Word:
        cached = self._images.get(node)
        if cached is not None:
            return cached
        if node == ():
            image = self._pad((), Fraction(1))
        else:
            parent = self._image(node[:-1])
            image = self._pad(parent + node[-1:], Fraction(1, 2 ** len(node)))
        self._images[node] = image
        return image

    def presented_interval(self, node: Word) -> tuple[Fraction, Fraction]:
        return self.base.presented_interval(self._image(node))

    def value(self, point: Branch) -> Fraction | None:
        return None


def lipschitz_reparam(presentation: FunctionPresentation, max_pad: int = 64) -> ReparamPresentation:
    """Reparametrize until presented widths beat 2^-depth at every node."""
    return ReparamPresentation(presentation, max_pad)
