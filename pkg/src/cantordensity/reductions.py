"""Tree-to-set reductions: label maps that encode a function or a parity.

Each reduction turns a tree into an offspring set whose labels carry
the interesting behavior to its stretched branches. The second needs
no function: labels approach 1 or 0 with the parity of the ones count,
so branches with infinitely many 1s oscillate maximally. The first
walks a presented function's dyadic approximations, handing the
branches with a 0-tail an alternating pair below and above the
function value. The third interleaves an input tree with the full
binary tree and reads the function through the run codec, with an
alternating sibling adjustment keeping the label sequence spread out
at every node.

On top of the same machinery sit two solid-set builders (labels read
from an enumerated value list, or assigned greedily without repeats)
and the uniformity pipeline, which sections a product tree along a
branch and prunes the largest third-reduction offspring down to it.

Every label map certifies hulls of its labels along a stretched
branch: a window of explicit values plus a closure anchor from the
presented interval at the window's end. Deeper labels only ever use
extensions of the anchor node, and the adjustment offsets shrink with
node length, so the anchored bound is sound for the whole tail.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .approx import FunctionPresentation, approx_pair, canonical_approx
from .branches import Branch
from .dualistic import solid_countable_range
from .dyadics import ONE, ZERO, RatInterval, dyadic_of_rank
from .offspring import OffspringOracle, offspring_prune
from .oracles import GraftedUnionOracle, MeasureOracle
from .trees import ExplicitTree, pair_letter, section, tree_interleave
from .words import (
    Word,
    bits_to_runs,
    decode_head,
    deinterleave,
    ones_count,
    runs_to_bits,
    split_trailing_zeros,
)

# Nodes checked by the construction-time validators: all words over the
# first four letters up to length three.
EXPLORE_LETTERS = 4
EXPLORE_DEPTH = 3

GREEDY_RANK_CAP = 4096


def _fold_into_unit(value: Fraction, anchor: Fraction) -> Fraction:
    """Pull a value poking out of (0;1) back toward its anchor."""
    if value >= ONE:
        return (ONE + anchor) / 2
    if value <= ZERO:
        return anchor / 2
    return value


def _explored_nodes() -> list[Word]:
    nodes: list[Word] = [()]
    for length in range(1, EXPLORE_DEPTH + 1):
        nodes.extend(product(range(EXPLORE_LETTERS), repeat=length))
    return nodes


def require_lipschitz(presentation: FunctionPresentation) -> None:
    """Check presented widths against the node scale on the explored window."""
    for node in _explored_nodes():
        lo, hi = presentation.presented_interval(node)
        if hi - lo > Fraction(1, 1 << len(node)):
            raise ValueError(
                f"presented interval at {node} is wider than its node scale: ({lo}; {hi})"
            )


class OnesParityLabels:
    """Labels approaching 1 on even ones counts and 0 on odd ones.

    Along a branch with infinitely many 1s the parity keeps flipping
    and the labels accumulate at both ends of the unit interval; with
    a 0-tail the parity freezes and the labels converge to 1 or 0.
    """

    kind = "ones-parity"

    def label(self, node: Word) -> Fraction:
        node = tuple(node)
        scale = Fraction(1, 1 << (len(node) + 1))
        return ONE - scale if ones_count(node) % 2 == 0 else scale

    def node_key(self, node: Word) -> object:
        return ("ones-parity", ones_count(node) % 2)

    def branch_label_hull(self, branch: Branch, start: int) -> RatInterval:
        horizon = max(start, len(branch.head) + 2 * len(branch.cycle)) + 2
        values = {self.label(branch.prefix(k)) for k in range(start, horizon + 1)}
        if ones_count(branch.cycle) == 0:
            # The parity is frozen past the horizon and the labels walk
            # monotonically to their limit.
            even = ones_count(branch.prefix(horizon)) % 2 == 0
            values.add(ONE if even else ZERO)
        else:
            values.update((ZERO, ONE))
        return RatInterval(min(values), max(values))


def second_reduction(tree) -> OffspringOracle:
    """Offspring whose stretched 1-heavy branches oscillate between 0 and 1."""
    return OffspringOracle(tree, OnesParityLabels())


class TailAlternationLabels:
    """Approximation pairs of a presented function, picked by 0-tail parity.

    The label at a node is the lower member of the pair at the node's
    1-ending prefix when the trailing zero block has even length, the
    upper member when odd. Walking down a 0-tail therefore alternates
    strictly below and above the function's value at the prefix, while
    branches with infinitely many 1s see both members converge.
    """

    kind = "tail-alternation"

    def __init__(self, presentation: FunctionPresentation):
        self.presentation = presentation
        self._pairs: dict[Word, tuple[Fraction, Fraction]] = {}

    def pair_at(self, head: Word) -> tuple[Fraction, Fraction]:
        head = tuple(head)
        cached = self._pairs.get(head)
        if cached is None:
            cached = approx_pair(self.presentation, head)
            self._pairs[head] = cached
        return cached

    def label(self, node: Word) -> Fraction:
        head, zeros = split_trailing_zeros(tuple(node))
        below, above = self.pair_at(head)
        return below if zeros % 2 == 0 else above

    def node_key(self, node: Word) -> object:
        return ("tail-alternation", tuple(node))

    def branch_label_hull(self, branch: Branch, start: int) -> RatInterval:
        horizon = max(start, len(branch.head) + 2 * len(branch.cycle)) + 2
        values = [self.label(branch.prefix(k)) for k in range(start, horizon + 1)]
        # Labels past the horizon use extensions of this head, whose
        # presented intervals are nested inside this one; the offsets
        # only shrink, and folds stay inside the clamped ends.
        anchor, _ = split_trailing_zeros(branch.prefix(horizon))
        lo, hi = self.presentation.presented_interval(anchor)
        off = Fraction(1, 1 << (len(anchor) + 2))
        values.append(max(ZERO, lo - off))
        values.append(min(ONE, hi + off))
        return RatInterval(min(values), max(values))


def first_reduction(presentation: FunctionPresentation, tree) -> OffspringOracle:
    """Offspring tying density on 1-heavy branches to a presented function.

    Stretched branches with infinitely many 1s get density within the
    presentation's shrinking intervals; branches with 0-tails oscillate
    across the approximation pair's gap at their 1-ending prefix.
    """
    return OffspringOracle(tree, TailAlternationLabels(presentation))


class InterleavedAdjustedLabels:
    """Run-codec labels on an interleaved tree with sibling adjustments.

    Even-length words split into a tree half and a codec half; the
    codec half's completed runs name a node of the presented function,
    and the trailing-zero parity of the tree half picks the raised or
    lowered variant of its adjusted value. Odd-length words close the
    dangling run with a 1 first. The adjustment alternates up and down
    with the last letter so that the values at a node's children spread
    out instead of converging with the presented intervals.
    """

    kind = "interleave-adjusted"

    def __init__(self, presentation: FunctionPresentation):
        self.presentation = presentation
        self._canonical: dict[Word, Fraction] = {}
        self._adjusted: dict[Word, Fraction] = {}

    def _canon(self, node: Word) -> Fraction:
        cached = self._canonical.get(node)
        if cached is None:
            cached = canonical_approx(self.presentation, node)
            self._canonical[node] = cached
        return cached

    def adjusted(self, node: Word) -> Fraction:
        """The canonical value pushed away from its sibling ladder."""
        node = tuple(node)
        cached = self._adjusted.get(node)
        if cached is not None:
            return cached
        base = self._canon(node)
        if node:
            offset = Fraction(1, 1 << (len(node) + 1))
            shifted = base + offset if node[-1] % 2 == 0 else base - offset
            value = _fold_into_unit(shifted, base)
        else:
            value = base
        self._adjusted[node] = value
        return value

    def adjusted_pair(self, node: Word) -> tuple[Fraction, Fraction]:
        """The adjusted value nudged strictly below and above itself."""
        middle = self.adjusted(node)
        offset = Fraction(1, 1 << (len(node) + 2))
        below = _fold_into_unit(middle - offset, middle)
        above = _fold_into_unit(middle + offset, middle)
        return below, above

    def label(self, word: Word) -> Fraction:
        word = tuple(word)
        if len(word) % 2 == 0:
            tree_half, codec_half = deinterleave(word)
            node = decode_head(codec_half[: ones_count(tree_half)])
            below, above = self.adjusted_pair(node)
            _, zeros = split_trailing_zeros(tree_half)
            return above if zeros % 2 == 0 else below
        tree_half, codec_half = deinterleave(word[:-1])
        node = bits_to_runs(codec_half[: ones_count(tree_half)] + (1,))
        return self.adjusted(node)

    def node_key(self, word: Word) -> object:
        return ("interleave-adjusted", tuple(word))

    def branch_label_hull(self, branch: Branch, start: int) -> RatInterval:
        horizon = max(start + 2, len(branch.head) + 4 * len(branch.cycle) + 4)
        values = [self.label(branch.prefix(k)) for k in range(start, horizon + 1)]
        # Past the horizon every label reads a node extending this one:
        # the codec half's completed runs only grow, and closing a run
        # with a 1 appends a letter. Adjustments at length m stay below
        # 3 * 2^-(m+2), so the widened closure bounds them all.
        tree_half, codec_half = deinterleave(branch.prefix(2 * (horizon // 2)))
        anchor = decode_head(codec_half[: ones_count(tree_half)])
        lo, hi = self.presentation.presented_interval(anchor)
        off = Fraction(3, 1 << (len(anchor) + 2))
        values.append(max(ZERO, lo - off))
        values.append(min(ONE, hi + off))
        return RatInterval(min(values), max(values))


def label_spread_certificate(labels: InterleavedAdjustedLabels) -> None:
    """Check that adjusted sibling values spread out at explored nodes.

    The adjustment rule is fixed; whether it separates the children's
    values depends on the presentation (canonical values can cancel the
    alternation exactly). Presentations failing the spread are rejected
    here instead of silently producing convergent label walks.
    """
    for node in _explored_nodes():
        children = [labels.adjusted(node + (k,)) for k in range(EXPLORE_LETTERS)]
        spread = max(children) - min(children)
        if spread < Fraction(1, 1 << (len(node) + 2)):
            raise ValueError(
                f"adjusted labels below {node} spread only {spread}; "
                "the alternation cancels for this presentation"
            )


def third_reduction(presentation: FunctionPresentation, tree) -> OffspringOracle:
    """Offspring over the interleaving of a tree with the full binary tree.

    Stretched branches whose halves both carry infinitely many 1s get
    density at the presented function's value of the decoded codec
    branch; killing either half leaves the labels swinging across an
    adjustment gap. The presentation must shrink at node scale and
    pass the sibling spread check.
    """
    require_lipschitz(presentation)
    labels = InterleavedAdjustedLabels(presentation)
    label_spread_certificate(labels)
    return OffspringOracle(
        tree_interleave(tree, ExplicitTree.full_binary()), labels
    )


def decoded_branch(branch: Branch) -> Branch | None:
    """The codec preimage of a branch, or None without infinitely many 1s.

    Rotating the cycle to a 1 boundary makes both halves of the run
    decomposition eventually periodic.
    """
    cycle = branch.cycle
    last_one = max((i for i, letter in enumerate(cycle) if letter == 1), default=None)
    if last_one is None:
        return None
    head = branch.head + cycle[: last_one + 1]
    rotated = cycle[last_one + 1 :] + cycle[: last_one + 1]
    return Branch(bits_to_runs(head), bits_to_runs(rotated))


class EnumeratedValueLabels:
    """Labels reading the first enumerated value inside each presented interval."""

    kind = "enumerated-value"

    def __init__(self, presentation: FunctionPresentation, values: tuple[Fraction, ...]):
        self.presentation = presentation
        self.values = tuple(values)
        self._chosen: dict[Word, Fraction] = {}

    def value_at(self, node: Word) -> Fraction:
        node = tuple(node)
        cached = self._chosen.get(node)
        if cached is not None:
            return cached
        lo, hi = self.presentation.presented_interval(node)
        for candidate in self.values:
            if lo < candidate < hi and ZERO < candidate < ONE:
                self._chosen[node] = candidate
                return candidate
        raise ValueError(
            f"no enumerated value lands in the presented interval at {node}: ({lo}; {hi})"
        )

    def label(self, word: Word) -> Fraction:
        return self.value_at(decode_head(tuple(word)))

    def node_key(self, word: Word) -> object:
        word = tuple(word)
        _, zeros = split_trailing_zeros(word)
        return ("enumerated", decode_head(word), zeros)

    def branch_label_hull(self, branch: Branch, start: int) -> RatInterval:
        horizon = max(start, len(branch.head) + 2 * len(branch.cycle)) + 2
        values = [self.label(branch.prefix(k)) for k in range(start, horizon + 1)]
        # Deeper labels are enumerated values inside nested intervals.
        anchor = decode_head(branch.prefix(horizon))
        lo, hi = self.presentation.presented_interval(anchor)
        values.extend((max(ZERO, lo), min(ONE, hi)))
        return RatInterval(min(values), max(values))


@dataclass(frozen=True)
class SolidAnalyticSet:
    """Offspring of the full tree labeled by enumerated values.

    Stretched branches with infinitely many 1s have density at the
    presented function's value of their decoded branch; 0-tailed
    stretched branches settle at the enumerated value of their head;
    everything off the stretched body lands in a copy with density 0
    or 1. The closed and open variants agree up to a null set.
    """

    values: tuple[Fraction, ...]
    presentation: FunctionPresentation = field(compare=False)
    oracle: OffspringOracle = field(compare=False)
    variant: str = "closed"

    def designated_value(self, branch: Branch) -> Fraction | None:
        decoded = decoded_branch(branch)
        if decoded is not None:
            return self.presentation.value(decoded)
        return self.oracle.labels.value_at(decode_head(branch.head))


def solid_analytic(
    presentation: FunctionPresentation,
    values: list[Fraction],
    variant: str = "closed",
) -> SolidAnalyticSet:
    """A solid set realizing a presented function on the codec branches.

    ``values`` enumerates the candidate densities; every explored
    presented interval must contain one of them, and the first hit is
    used. Construction fails naming the first node whose interval
    misses the enumeration.
    """
    require_lipschitz(presentation)
    labels = EnumeratedValueLabels(presentation, tuple(values))
    for node in _explored_nodes():
        labels.value_at(node)
    oracle = OffspringOracle(ExplicitTree.full_binary(), labels, variant=variant)
    return SolidAnalyticSet(tuple(values), presentation, oracle, variant)


class GreedyInjectiveLabels:
    """A fixed table of pairwise distinct labels, canonical beyond it."""

    kind = "greedy-injective"

    def __init__(self, presentation: FunctionPresentation, table: dict[Word, Fraction]):
        self.presentation = presentation
        self.table = dict(table)
        self._canonical: dict[Word, Fraction] = {}

    def value_at(self, node: Word) -> Fraction:
        node = tuple(node)
        got = self.table.get(node)
        if got is not None:
            return got
        cached = self._canonical.get(node)
        if cached is None:
            cached = canonical_approx(self.presentation, node)
            self._canonical[node] = cached
        return cached

    def label(self, word: Word) -> Fraction:
        return self.value_at(decode_head(tuple(word)))

    def node_key(self, word: Word) -> object:
        word = tuple(word)
        _, zeros = split_trailing_zeros(word)
        return ("greedy", decode_head(word), zeros)

    def branch_label_hull(self, branch: Branch, start: int) -> RatInterval:
        horizon = max(start, len(branch.head) + 2 * len(branch.cycle)) + 2
        values = [self.label(branch.prefix(k)) for k in range(start, horizon + 1)]
        # Table entries and canonical values both live inside the
        # presented intervals, nested below the anchor.
        anchor = decode_head(branch.prefix(horizon))
        lo, hi = self.presentation.presented_interval(anchor)
        values.extend((max(ZERO, lo), min(ONE, hi)))
        return RatInterval(min(values), max(values))


@dataclass(frozen=True)
class SolidInjectiveSet:
    """A graft of an injectively labeled offspring and a countable-range part."""

    assignments: tuple[tuple[Word, Fraction], ...]
    leftovers: tuple[Fraction, ...]
    oracle: MeasureOracle = field(compare=False)

    def audit(self) -> bool:
        """Pairwise distinct labels over the explored assignment table."""
        labels = [value for _, value in self.assignments]
        return len(set(labels)) == len(labels)


def solid_injective(
    presentation: FunctionPresentation,
    values: list[Fraction],
    explore_depth: int = 6,
) -> SolidInjectiveSet:
    """A solid set with pairwise distinct densities on its designated points.

    Nodes whose codec image fits within ``explore_depth`` get labels
    assigned greedily: the first unused entry of ``values`` inside the
    presented interval, falling back to unused dyadics by rank. The
    values never picked up are realized once each by a grafted
    countable-range part, so the requested list is covered either way.
    """
    require_lipschitz(presentation)
    heads = sorted(
        _all_nat_words(explore_depth),
        key=lambda node: (len(runs_to_bits(node)), node),
    )
    used: set[Fraction] = set()
    table: dict[Word, Fraction] = {}
    for node in heads:
        lo, hi = presentation.presented_interval(node)
        pick: Fraction | None = None
        for candidate in values:
            if candidate not in used and lo < candidate < hi and ZERO < candidate < ONE:
                pick = candidate
                break
        if pick is None:
            for rank in range(GREEDY_RANK_CAP):
                candidate = dyadic_of_rank(rank)
                if candidate not in used and lo < candidate < hi:
                    pick = candidate
                    break
        if pick is None:
            raise ValueError(f"no fresh label available inside the presented interval at {node}")
        used.add(pick)
        table[node] = pick
    leftovers = tuple(v for v in values if v not in used)
    body = OffspringOracle(
        ExplicitTree.full_binary(), GreedyInjectiveLabels(presentation, table)
    )
    spare = solid_countable_range(list(leftovers))
    oracle = GraftedUnionOracle([((0,), body), ((1,), spare.oracle)])
    return SolidInjectiveSet(tuple(sorted(table.items())), leftovers, oracle)


def _all_nat_words(budget: int) -> list[Word]:
    """Nat words whose codec image has at most ``budget`` letters."""
    out: list[Word] = [()]
    frontier: list[Word] = [()]
    while frontier:
        grown: list[Word] = []
        for word in frontier:
            letter = 0
            while len(runs_to_bits(word + (letter,))) <= budget:
                grown.append(word + (letter,))
                letter += 1
        out.extend(grown)
        frontier = grown
    return out


def _zip_alive(pairs: ExplicitTree, word: Word) -> bool:
    evens, odds = deinterleave(word)
    if len(word) % 2 == 0:
        return pairs.member(tuple(pair_letter(evens[i], odds[i]) for i in range(len(odds))))
    return any(
        pairs.member(
            tuple(pair_letter(evens[i], (odds + (b,))[i]) for i in range(len(evens)))
        )
        for b in (0, 1)
    )


def interleave_closure(pairs: ExplicitTree, depth: int) -> ExplicitTree:
    """The downward closure of the interleavings of a pair tree, materialized.

    Exact to twice ``depth``; the frontier closes with zero-tails, which
    matches the pair tree's own policy completion.
    """
    cap = 2 * depth
    levels: list[set[Word]] = [set() for _ in range(cap + 1)]
    levels[0].add(())
    for n in range(cap):
        for word in levels[n]:
            for b in (0, 1):
                child = word + (b,)
                if _zip_alive(pairs, child):
                    levels[n + 1].add(child)
    nodes = [word for level in levels for word in level]
    node_set = set(nodes)
    policies = {
        word: "zeros"
        for word in nodes
        if not any(word + (b,) in node_set for b in (0, 1))
    }
    return ExplicitTree(nodes, policies, arity=2)


def uniformity_pipeline(
    product_tree: ExplicitTree,
    z: Branch,
    presentation: FunctionPresentation,
    depth: int,
) -> OffspringOracle:
    """Section a triple tree along a branch and prune the third reduction.

    ``product_tree`` carries letters packing three bits; sectioning
    along ``z`` leaves a pair tree, whose interleavings' downward
    closure prunes the full-tree offspring. The result depends on ``z``
    only through its first ``depth`` letters, so branches agreeing that
    far yield identical oracles.
    """
    if product_tree.arity != 8:
        raise ValueError("uniformity expects a triple-product alphabet of arity 8")
    pairs = section(product_tree, z, depth)
    body = interleave_closure(pairs, depth)
    largest = third_reduction(presentation, ExplicitTree.full_binary())
    return offspring_prune(largest, body)
