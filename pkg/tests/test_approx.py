"""Canonical approximation: containment, sibling control, exact values."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantordensity.approx import (
    AffineImagePresentation,
    ConstantPresentation,
    InjectivePresentation,
    approx_pair,
    canonical_approx,
    lipschitz_reparam,
)
from cantordensity.branches import Branch

F = Fraction

PRESETS = [
    ConstantPresentation(F(1, 2)),
    ConstantPresentation(F(1, 3)),
    AffineImagePresentation(F(1, 3), F(2, 3)),
    AffineImagePresentation(F(1, 10), F(9, 10)),
    InjectivePresentation(F(1, 4)),
    InjectivePresentation(F(1, 100)),
]


def binary_nodes(depth):
    for k in range(depth + 1):
        yield from itertools.product((0, 1), repeat=k)


def test_canonical_values_frozen():
    assert canonical_approx(ConstantPresentation(F(1, 3)), ()) == F(1, 2)
    assert canonical_approx(ConstantPresentation(F(1, 3)), (0, 0)) == F(1, 4)
    assert canonical_approx(AffineImagePresentation(F(1, 3), F(2, 3)), ()) == F(1, 2)
    assert canonical_approx(InjectivePresentation(F(1, 4)), (0,)) == F(1, 2)


def test_pair_frozen_at_shallow_nodes():
    constant = ConstantPresentation(F(1, 2))
    assert approx_pair(constant, ()) == (F(1, 4), F(3, 4))
    assert approx_pair(constant, (1,)) == (F(3, 8), F(5, 8))


def test_containment_and_sibling_bounds_exhaustively():
    for presentation in PRESETS:
        for node in binary_nodes(7):
            lo, hi = presentation.presented_interval(node)
            middle = canonical_approx(presentation, node)
            assert lo < middle < hi
            scale = F(1, 2 ** len(node))
            left = canonical_approx(presentation, node + (0,))
            right = canonical_approx(presentation, node + (1,))
            assert abs(left - right) < scale
            below, above = approx_pair(presentation, node)
            assert 0 < below < middle < above < 1
            assert above - below < scale


def test_presentations_are_nested():
    for presentation in PRESETS:
        for node in binary_nodes(6):
            lo, hi = presentation.presented_interval(node)
            for letter in (0, 1, 2):
                clo, chi = presentation.presented_interval(node + (letter,))
                assert lo <= clo and chi <= hi


def test_wide_letter_siblings_stay_bounded():
    for presentation in PRESETS:
        for node in [(), (2,), (0, 3), (1, 1, 2)]:
            scale = F(1, 2 ** len(node))
            values = [
                canonical_approx(presentation, node + (letter,)) for letter in range(5)
            ]
            assert max(values) - min(values) < scale


def test_affine_value_frozen():
    presentation = AffineImagePresentation(F(1, 3), F(2, 3))
    point = Branch((1, 0), (1,))
    assert presentation.value(point) == F(7, 12)
    zero = presentation.value(Branch.zeros())
    assert zero == F(1, 3)


def test_injective_value_distinguishes_points():
    presentation = InjectivePresentation(F(1, 4))
    a = presentation.value(Branch((0,), (1,)))
    b = presentation.value(Branch((1,), (1,)))
    c = presentation.value(Branch((), (2,)))
    assert len({a, b, c}) == 3
    for v in (a, b, c):
        assert F(1, 4) < v < F(3, 4)


@st.composite
def periodic_points(draw):
    head = draw(st.lists(st.integers(min_value=0, max_value=3), max_size=4))
    cycle = draw(st.lists(st.integers(min_value=0, max_value=3), min_size=1, max_size=3))
    return Branch(tuple(head), tuple(cycle))


@given(periodic_points(), st.integers(min_value=0, max_value=8))
@settings(max_examples=80, deadline=None)
def test_values_live_in_presented_intervals(point, depth):
    for presentation in PRESETS:
        value = presentation.value(point)
        lo, hi = presentation.presented_interval(point.prefix(depth))
        assert lo < value < hi
        assert abs(value - canonical_approx(presentation, point.prefix(depth))) < hi - lo


class _Slow:
    """Presented widths shrink at half speed; values constant 1/2."""

    kind = "slow"

    def presented_interval(self, node):
        half = F(1, 2 ** (len(node) // 2 + 1))
        return F(1, 2) - half, F(1, 2) + half

    def value(self, point):
        return F(1, 2)


def test_reparam_restores_the_modulus():
    fast = lipschitz_reparam(_Slow())
    for node in binary_nodes(6):
        lo, hi = fast.presented_interval(node)
        assert hi - lo < F(1, 2 ** len(node))
        assert lo < canonical_approx(fast, node) < hi


class _Stuck:
    kind = "stuck"

    def presented_interval(self, node):
        return F(1, 4), F(3, 4)

    def value(self, point):
        return None


def test_reparam_reports_non_shrinking_nodes():
    with pytest.raises(ValueError, match="do not shrink"):
        lipschitz_reparam(_Stuck(), max_pad=8).presented_interval((0,))


def test_preset_validation():
    with pytest.raises(ValueError):
        ConstantPresentation(F(1))
    with pytest.raises(ValueError):
        AffineImagePresentation(F(2, 3), F(1, 3))
    with pytest.raises(ValueError):
        InjectivePresentation(F(1, 2))
