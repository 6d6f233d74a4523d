"""Offspring oracles checked against independent cell enumeration."""

import itertools
import random
from fractions import Fraction as F

import pytest

from cantordensity.branches import Branch, StretchedBranch
from cantordensity.dyadics import EMPTY_MASS, FULL_MASS, UNIT, RatInterval
from cantordensity.offspring import ExplicitLabels, OffspringOracle, offspring_build
from cantordensity.trees import ExplicitTree, InterleaveTree, periodic
from cantordensity.words import triangular
from oracletools import offspring_cell_bounds

HALF_TABLE = ExplicitLabels({}, F(1, 2))


def full_half() -> OffspringOracle:
    return OffspringOracle(ExplicitTree.full_binary(), HALF_TABLE)


def _binary_words(max_len):
    for n in range(max_len + 1):
        yield from itertools.product((0, 1), repeat=n)


def _random_tree(rng: random.Random) -> ExplicitTree:
    nodes = [()]
    frontier = [()]
    for _ in range(3):
        grown = []
        for parent in frontier:
            for letter in (0, 1):
                if rng.random() < 0.7:
                    child = parent + (letter,)
                    nodes.append(child)
                    grown.append(child)
        frontier = grown
    node_set = set(nodes)
    endings = ["zeros", "full", periodic((0, 1)), periodic((1,))]
    policies = {}
    for word in node_set:
        if not any(word + (letter,) in node_set for letter in (0, 1)):
            policies[word] = endings[rng.randrange(len(endings))]
    return ExplicitTree(node_set, policies)


def _random_labels(rng: random.Random) -> ExplicitLabels:
    mapping = {}
    for depth in range(3):
        for bits in itertools.product((0, 1), repeat=depth):
            if rng.random() < 0.5:
                mapping[bits] = F(rng.randrange(9), 8)
    return ExplicitLabels(mapping, F(rng.randrange(9), 8))


# ----- hand-checked small values -----------------------------------------


def test_root_bounds_by_hand():
    # Depth-4 cells: a mixed second block flags into the half piece and
    # the next letter decides membership (4 cells in, 4 out); a pure
    # second block leaves the third block unfinished (8 cells open).
    oracle = full_half()
    assert oracle.local_bounds((), 4) == RatInterval(F(1, 4), F(3, 4))


def test_flagged_word_settles():
    oracle = full_half()
    assert oracle.local_bounds((0, 1, 0), 4) == RatInterval.point(F(1, 2))


def test_off_tree_words_are_empty():
    tree = ExplicitTree([()], {(): "zeros"})
    oracle = OffspringOracle(tree, HALF_TABLE)
    assert oracle.local_bounds((1,), 6) == EMPTY_MASS
    assert oracle.local_bounds((0, 1, 1), 8) == EMPTY_MASS


def test_zero_budget_is_unit():
    assert full_half().measure_bounds(0) == UNIT


# ----- agreement with exhaustive enumeration -----------------------------


def test_bounds_equal_cell_enumeration():
    rng = random.Random(20260815)
    for _ in range(10):
        tree = _random_tree(rng)
        labels = _random_labels(rng)
        oracle = OffspringOracle(tree, labels)
        for word in _binary_words(3):
            lo, hi = offspring_cell_bounds(tree.member, labels.label, word, 11)
            got = oracle.local_bounds(word, 11)
            assert (got.lo, got.hi) == (lo, hi), (word, sorted(tree.nodes))


def test_interleave_tree_matches_enumeration():
    zeros = ExplicitTree([()], {(): "zeros"})
    tree = InterleaveTree(ExplicitTree.full_binary(), zeros)
    labels = ExplicitLabels({(1,): F(1, 4)}, F(1, 2))
    oracle = OffspringOracle(tree, labels)
    for word in _binary_words(3):
        lo, hi = offspring_cell_bounds(tree.member, labels.label, word, 11)
        got = oracle.local_bounds(word, 11)
        assert (got.lo, got.hi) == (lo, hi), word


def test_reuse_respects_horizon():
    # Deep calls settle regions exactly; later shallow calls must still
    # answer as a fresh oracle would at the shallow horizon.
    rng = random.Random(77)
    for _ in range(6):
        tree = _random_tree(rng)
        labels = _random_labels(rng)
        warm = OffspringOracle(tree, labels)
        for word in _binary_words(3):
            warm.local_bounds(word, 12)
        for word in _binary_words(3):
            for budget in (0, 3, 6):
                cold = OffspringOracle(tree, labels)
                assert warm.local_bounds(word, budget) == cold.local_bounds(word, budget)


def test_bounds_tighten_with_budget():
    rng = random.Random(11)
    tree = _random_tree(rng)
    labels = _random_labels(rng)
    oracle = OffspringOracle(tree, labels)
    previous = UNIT
    for budget in range(0, 14, 2):
        current = oracle.measure_bounds(budget)
        assert previous.lo <= current.lo and current.hi <= previous.hi
        previous = current


# ----- behaviour along branches -------------------------------------------


def test_boundary_bounds_track_labels():
    rng = random.Random(5)
    tree = ExplicitTree.full_binary()
    for _ in range(5):
        labels = _random_labels(rng)
        oracle = OffspringOracle(tree, labels)
        for base in (Branch((), (0,)), Branch((), (1,)), Branch((1, 0), (0,))):
            point = StretchedBranch(base)
            for order in range(2, 7):
                target = labels.label(base.prefix(order))
                margin = F(1, 1 << order)
                nearby = RatInterval(max(F(0), target - margin), min(F(1), target + margin))
                bounds = oracle.local_bounds(point.prefix(triangular(order)), triangular(order) + 12)
                assert bounds.intersects(nearby)


def test_certificate_dead_walk():
    tree = ExplicitTree([()], {(): "zeros"})
    oracle = OffspringOracle(tree, HALF_TABLE)
    cert = oracle.tail_certificate(Branch((1,), (1,)), 40)
    assert cert.interval == EMPTY_MASS
    assert cert.start == 1
    stretched = oracle.tail_certificate(StretchedBranch(Branch((), (1,))), 40)
    assert stretched.interval == EMPTY_MASS


def test_certificate_flag_entry():
    oracle = full_half()
    point = Branch((0, 0, 1), (0,))
    cert = oracle.tail_certificate(point, 40)
    assert cert.interval == FULL_MASS
    assert cert.start == 4
    verdict = oracle.classify(point)
    assert verdict.kind == "converges"
    assert verdict.interval.contains(F(1))


def test_certificate_hull_constant_labels():
    tree = ExplicitTree.full_binary()
    labels = ExplicitLabels({(1,): F(3, 4)}, F(3, 4))
    oracle = OffspringOracle(tree, labels)
    cert = oracle.tail_certificate(Branch((1,), (0,)), 48)
    assert cert is not None
    assert cert.start == triangular(12)
    assert cert.interval.contains(F(3, 4))
    assert cert.interval.width <= F(2, 1 << 12)


def test_certificate_hull_spans_table_labels():
    tree = ExplicitTree.full_binary()
    labels = ExplicitLabels({(0, 0): F(1, 4), (0, 0, 0): F(7, 8)}, F(1, 2))
    oracle = OffspringOracle(tree, labels)
    cert = oracle.tail_certificate(StretchedBranch(Branch((), (0,))), 12)
    assert cert.start == triangular(3)
    assert cert.interval.contains(F(7, 8))
    assert cert.interval.contains(F(1, 2))


def test_classify_converges_on_stretched_branches():
    oracle = full_half()
    for base in (Branch((), (0, 1)), Branch((), (0,))):
        verdict = oracle.classify(StretchedBranch(base), max_depth=48)
        assert verdict.kind == "converges"
        assert verdict.interval.contains(F(1, 2))
        assert verdict.interval.width <= F(2, 1 << 12)


# ----- label tables --------------------------------------------------------


def test_labels_validation():
    with pytest.raises(ValueError):
        ExplicitLabels({(0,): F(-1, 3)})
    with pytest.raises(ValueError):
        ExplicitLabels({}, F(9, 8))
    # Non-dyadic rationals are fine at the label-map level.
    assert ExplicitLabels({(0,): F(1, 3)}).label((0,)) == F(1, 3)


def test_build_rejects_degenerate_labels():
    tree = ExplicitTree.full_binary()
    with pytest.raises(ValueError):
        offspring_build(tree, {(0,): F(0)})
    with pytest.raises(ValueError):
        offspring_build(tree, ExplicitLabels({}, F(1)))
    with pytest.raises(ValueError):
        offspring_build(tree, {}, variant="ajar")
    built = offspring_build(tree, {(0,): F(1, 3)}, variant="open")
    assert built.variant == "open"
    assert built.labels.label((0,)) == F(1, 3)


def test_non_dyadic_copies_answer_exactly():
    # Flagging into a copy of mass 1/3 settles the localized measure to
    # the exact point 1/3, and tail certificates pin the branch there.
    third = offspring_build(ExplicitTree.full_binary(), ExplicitLabels({}, F(1, 3)))
    flagged = (0, 1, 0)  # root block 0, then the mixed block (1, 0)
    assert third.local_bounds(flagged, 10) == RatInterval.point(F(1, 3))
    deeper = third.local_bounds(flagged + (0,), 12)
    assert deeper == RatInterval.point(F(2, 3))
    cert = third.tail_certificate(Branch(flagged, (0,)), 40)
    assert cert is not None
    assert cert.interval.contains(F(0)) or cert.interval.is_point()
    verdict = third.classify(Branch(flagged + (0, 1, 1), (0,)), max_depth=60)
    assert verdict.kind == "converges"


def test_labels_keys_and_hull():
    labels = ExplicitLabels({(0, 1): F(1, 4)}, F(1, 2))
    assert labels.label((0, 1)) == F(1, 4)
    assert labels.label((1, 1)) == F(1, 2)
    assert labels.node_key((0,)) == ("table", (0,))
    assert labels.node_key((1,)) == ("default",)
    hull = labels.branch_label_hull(Branch((0, 1), (1,)), 0)
    assert (hull.lo, hull.hi) == (F(1, 4), F(1, 2))
