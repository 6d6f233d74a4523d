"""Offspring sets: trees thickened by measure-controlled copies.

Membership reads a stream in blocks of growing size: block k carries
k + 1 letters. A block written with a single letter walks from the
current tree node to the matching child; the first block mixing both
letters flags the stream, and from the next position membership is
decided inside a clopen piece whose measure is the flagged node's
label. Streams walking into nodes outside the tree are out.

The evaluator returns certified interval bounds: regions resolved
within the horizon (dead nodes, settled copies) contribute exact mass,
every unresolved region contributes its full [0, 1] of slack. With
dyadic labels the bounds agree, at tolerance zero, with what exhaustive
cell enumeration to the horizon depth gives. Non-dyadic labels hang
measured stand-in sets instead of clopen pieces; those copy regions
answer exactly at every depth, tighter than any enumeration.

Along a stretched tree branch the localized measure at the block
boundary of depth k lies within 2^-k of the node's label: the mixed
completions of the next block carry the label's copies and everything
else has mass at most 2^-k. Tail certificates combine this with a
certified hull of the labels along the branch.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Protocol

from .branches import Branch, StretchedBranch, as_stretched
from .clopen import ClopenSet, piece_of_measure
from .dualistic import dualistic_of_measure
from .dyadics import EMPTY_MASS, FULL_MASS, HALF, UNIT, ONE, ZERO, RatInterval, is_dyadic
from .oracles import ClopenOracle, MeasureOracle, Point, TailCertificate, DEFAULT_WINDOW
from .trees import IntersectionTree
from .words import Word, triangular

State = tuple


def _join_cost(left: int | None, right: int | None) -> int | None:
    if left is None or right is None:
        return None
    return max(left, right) + 1


class LabelMap(Protocol):
    """Rational labels on tree nodes, with enough structure to certify tails."""

    kind: str

    def label(self, node: Word) -> Fraction:
        """The copy measure at a node, in [0, 1]. Dyadic values get
        canonical clopen copies; anything else a measured stand-in set
        of exactly that mass."""
        ...

    def node_key(self, node: Word) -> object:
        """Nodes with equal keys (and equal depth) carry identical label
        assignments on their whole subtrees."""
        ...

    def branch_label_hull(self, branch: Branch, start: int) -> RatInterval:
        """A closed interval containing label(branch prefix k) for all
        k >= start."""
        ...


class ExplicitLabels:
    """A finite table of labels; everything beyond it gets the default."""

    kind = "explicit"

    def __init__(self, mapping: dict[Word, Fraction], default: Fraction = HALF):
        for node, value in mapping.items():
            if not ZERO <= value <= ONE:
                raise ValueError(f"label at {node} must lie in [0, 1]: {value}")
        if not ZERO <= default <= ONE:
            raise ValueError(f"default label must lie in [0, 1]: {default}")
        self.mapping = {tuple(node): value for node, value in mapping.items()}
        self.default = default
        self.depth = max((len(node) for node in self.mapping), default=0)
        self._touched = {node[:j] for node in self.mapping for j in range(len(node) + 1)}

    def label(self, node: Word) -> Fraction:
        return self.mapping.get(tuple(node), self.default)

    def node_key(self, node: Word) -> object:
        node = tuple(node)
        if node in self._touched:
            return ("table", node)
        return ("default",)

    def branch_label_hull(self, branch: Branch, start: int) -> RatInterval:
        values = {self.default}
        for k in range(start, self.depth + 1):
            values.add(self.label(branch.prefix(k)))
        return RatInterval(min(values), max(values))


class OffspringOracle(MeasureOracle):
    """Certified localized measures of the offspring of a labeled tree.

    The closed and open variants differ by a null set, so one oracle
    serves both; the flag is kept for callers that care which one the
    spec meant.
    """

    kind = "offspring"

    def __init__(
        self,
        tree,
        labels: LabelMap,
        window: int = DEFAULT_WINDOW,
        variant: str = "closed",
    ):
        if variant not in ("closed", "open"):
            raise ValueError(f"variant must be 'closed' or 'open': {variant}")
        self.tree = tree
        self.labels = labels
        self.window = window
        self.variant = variant
        self._pieces: dict[Fraction, ClopenSet] = {}
        self._stand_ins: dict[Fraction, MeasureOracle] = {}
        self._resolved: dict[tuple, tuple[RatInterval, int]] = {}

    # ----- the block state machine -------------------------------------
    #
    # ("dead",)                  off the tree, or flagged into an empty piece
    # ("node", t)                at the block boundary of tree node t
    # ("pure", t, letter, m)     m letters into t's block, all equal
    # ("mixed", t, m)            m letters into t's block, both letters seen
    # ("copy", t, v)             flagged at t, v letters into the copy

    def _piece(self, value: Fraction) -> ClopenSet:
        piece = self._pieces.get(value)
        if piece is None:
            piece = piece_of_measure(value)
            self._pieces[value] = piece
        return piece

    def _stand_in(self, value: Fraction) -> MeasureOracle:
        """An exact oracle of the given non-dyadic mass, for copy regions."""
        oracle = self._stand_ins.get(value)
        if oracle is None:
            oracle = dualistic_of_measure(value).oracle
            self._stand_ins[value] = oracle
        return oracle

    def _child(self, t: Word, letter: int) -> State:
        child = t + (letter,)
        if self.tree.member(child):
            return ("node", child)
        return ("dead",)

    def _step(self, state: State, letter: int) -> State:
        kind = state[0]
        if kind == "dead":
            return state
        if kind == "copy":
            return ("copy", state[1], state[2] + (letter,))
        if kind == "node":
            t = state[1]
            if len(t) == 0:
                # The root block has a single letter; it is always pure.
                return self._child(t, letter)
            return ("pure", t, letter, 1)
        if kind == "pure":
            _, t, first, m = state
            size = len(t) + 1
            if letter == first:
                if m + 1 == size:
                    return self._child(t, first)
                return ("pure", t, first, m + 1)
            if m + 1 == size:
                return ("copy", t, ())
            return ("mixed", t, m + 1)
        _, t, m = state
        if m + 1 == len(t) + 1:
            return ("copy", t, ())
        return ("mixed", t, m + 1)

    def _key(self, state: State) -> tuple:
        kind = state[0]
        if kind == "dead":
            return state
        if kind == "copy":
            _, t, v = state
            value = self.labels.label(t)
            if not is_dyadic(value):
                return ("copy-exact", value, v)
            localized = self._piece(value).localize(v)
            # The copy's future depends only on what is left of the piece.
            return ("copy", localized.words)
        t = state[1]
        region = self.tree.region_key(t)
        label_key = self.labels.node_key(t)
        return (kind, len(t), state[2:], region, label_key)

    def _eval(self, state: State, h: int, memo: dict) -> tuple[RatInterval, int | None]:
        """Bounds at a state with h letters of lookahead left.

        The second component is the lookahead actually needed when the
        value is exact, or None when the horizon was hit. Exact values
        are kept across calls but only reused when the current horizon
        could have reproduced them, so the answers stay equal to honest
        exhaustive enumeration at the horizon depth.
        """
        key = self._key(state)
        settled = self._resolved.get(key)
        if settled is not None and settled[1] <= h:
            return settled
        step_key = (key, h)
        cached = memo.get(step_key)
        if cached is not None:
            return cached
        kind = state[0]
        if kind == "dead":
            out: tuple[RatInterval, int | None] = (EMPTY_MASS, 0)
        elif kind == "copy":
            _, t, v = state
            value = self.labels.label(t)
            if not is_dyadic(value):
                # The stand-in set answers exactly at every depth.
                out = (self._stand_in(value).local_bounds(v, len(v)), 0)
            else:
                localized = self._piece(value).localize(v)
                if localized.is_empty():
                    out = (EMPTY_MASS, 0)
                elif localized.is_full():
                    out = (FULL_MASS, 0)
                elif h <= 0:
                    out = (UNIT, None)
                else:
                    left, lcost = self._eval(("copy", t, v + (0,)), h - 1, memo)
                    right, rcost = self._eval(("copy", t, v + (1,)), h - 1, memo)
                    out = ((left + right).scale(HALF), _join_cost(lcost, rcost))
        elif h <= 0:
            out = (UNIT, None)
        elif kind == "mixed":
            # Both continuations land in the same state; no averaging.
            value, cost = self._eval(self._step(state, 0), h - 1, memo)
            out = (value, None if cost is None else cost + 1)
        else:
            left, lcost = self._eval(self._step(state, 0), h - 1, memo)
            right, rcost = self._eval(self._step(state, 1), h - 1, memo)
            out = ((left + right).scale(HALF), _join_cost(lcost, rcost))
        if out[1] is not None:
            self._resolved[key] = out
        memo[step_key] = out
        return out

    def _walk(self, word: Word) -> State:
        state: State = ("node", ())
        for letter in word:
            state = self._step(state, letter)
            if state[0] == "dead":
                return state
        return state

    def local_bounds(self, word: Word, budget: int) -> RatInterval:
        word = tuple(word)
        horizon = max(budget, len(word))
        state = self._walk(word)
        bounds, _ = self._eval(state, horizon - len(word), {})
        return bounds

    # ----- tail certificates --------------------------------------------

    def tail_certificate(self, point: Point, effort: int) -> TailCertificate | None:
        start_order = max(2, effort // 4)
        if isinstance(point, StretchedBranch):
            base = point.base
        else:
            structural = self._walking_certificate(point, triangular(start_order), effort)
            if structural is not None:
                return structural
            base = as_stretched(point)
            if base is None:
                return None
        if self.tree.accepts_branch(base.head, base.cycle):
            return self._hull_certificate(base, start_order)
        death = self._death_depth(base, 4 * (start_order + len(base.head) + len(base.cycle)) + 64)
        if death is None:
            return None
        return TailCertificate(EMPTY_MASS, triangular(death))

    def _hull_certificate(self, base: Branch, start_order: int) -> TailCertificate:
        hull = self.labels.branch_label_hull(base, start_order)
        pad = Fraction(1, 1 << start_order)
        interval = RatInterval(max(ZERO, hull.lo - pad), min(ONE, hull.hi + pad))
        return TailCertificate(interval, triangular(start_order))

    def _death_depth(self, base: Branch, cap: int) -> int | None:
        for k in range(1, cap + 1):
            if not self.tree.member(base.prefix(k)):
                return k
        return None

    def _walking_certificate(self, point: Branch, guard: int, effort: int) -> TailCertificate | None:
        """Follow the point letter by letter; dead walks and flagged walks
        settle into exact sub-certificates."""
        state: State = ("node", ())
        for pos in range(guard):
            state = self._step(state, point.at(pos))
            if state[0] == "dead":
                return TailCertificate(EMPTY_MASS, pos + 1)
            if state[0] == "copy":
                value = self.labels.label(state[1])
                if is_dyadic(value):
                    inside: MeasureOracle = ClopenOracle(self._piece(value))
                else:
                    inside = self._stand_in(value)
                inner = inside.tail_certificate(point.drop(pos + 1), effort)
                if inner is None:
                    return TailCertificate(UNIT, pos + 1)
                return TailCertificate(inner.interval, inner.start + pos + 1)
        return None


def offspring_prune(offspring: OffspringOracle, subtree) -> OffspringOracle:
    """The offspring with flag mass behind nodes outside ``subtree`` removed.

    Removing the stretched cylinders of the dropped nodes leaves, up to
    a null set, exactly the offspring of the intersection tree: streams
    that flag before reaching a dropped node never enter its cylinder.
    """
    for node in getattr(subtree, "nodes", ()):
        if not offspring.tree.member(node):
            raise ValueError(f"not a subtree: {node} is outside the offspring tree")
    return OffspringOracle(
        IntersectionTree(offspring.tree, subtree),
        offspring.labels,
        window=offspring.window,
        variant=offspring.variant,
    )


def offspring_build(tree, labels, variant: str = "closed") -> OffspringOracle:
    """Build the offspring oracle of a labeled tree.

    ``labels`` is either a mapping from nodes to rationals, wrapped into
    an explicit table over the default 1/2, or a ready-made label map.
    Explicit labels must lie strictly between 0 and 1; dyadic ones get
    canonical clopen copies, the rest exact measured stand-ins.
    """
    if isinstance(labels, dict):
        labels = ExplicitLabels(labels)
    if isinstance(labels, ExplicitLabels):
        for node, value in labels.mapping.items():
            if not ZERO < value < ONE:
                raise ValueError(f"label at {node} must lie in (0;1): {value}")
        if not ZERO < labels.default < ONE:
            raise ValueError(f"default label must lie in (0;1): {labels.default}")
    return OffspringOracle(tree, labels, variant=variant)
