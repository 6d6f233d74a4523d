"""Oracle framework: exact clopen oracles, combinators, classification."""

from fractions import Fraction

import pytest

from cantordensity.branches import Branch, StretchedBranch, bit_at, interleave_branches
from cantordensity.clopen import ClopenSet, piece_of_measure
from cantordensity.dyadics import RatInterval
from cantordensity.oracles import (
    ClopenOracle,
    ComplementOracle,
    DisjointSumOracle,
    GraftedUnionOracle,
    MeasureOracle,
    SpinePrefixOracle,
    certified_oscillation,
    compose,
    from_clopen,
)

F = Fraction


def test_clopen_oracle_is_exact_everywhere():
    oracle = ClopenOracle(ClopenSet.from_words([(0, 0), (1,)]))
    assert oracle.measure_bounds() == RatInterval.point(F(3, 4))
    assert oracle.local_bounds((0,), 0) == RatInterval.point(F(1, 2))
    assert oracle.local_bounds((0, 1), 50) == RatInterval.point(F(0))
    assert oracle.local_bounds((1, 1, 0), 0) == RatInterval.point(F(1))


def test_clopen_oracle_certificate_settles_at_depth():
    oracle = ClopenOracle(ClopenSet.from_words([(0, 0), (1,)]))
    inside = oracle.tail_certificate(Branch((0, 0), (1,)), effort=10)
    assert inside.interval == RatInterval.point(F(1))
    assert inside.start <= 2
    outside = oracle.tail_certificate(Branch((0, 1), (0,)), effort=10)
    assert outside.interval == RatInterval.point(F(0))


def test_clopen_trace_matches_localization():
    body = ClopenSet.from_words([(0, 1), (1, 0, 0)])
    oracle = ClopenOracle(body)
    point = Branch((0, 1, 1), (0,))
    for depth, bounds in enumerate(oracle.trace(point, 6)):
        expected = body.local_measure(point.prefix(depth))
        assert bounds == RatInterval.point(expected)


def test_complement_oracle_reflects():
    oracle = ComplementOracle(ClopenOracle(piece_of_measure(F(1, 4))))
    assert oracle.measure_bounds() == RatInterval.point(F(3, 4))
    assert oracle.local_bounds((0, 0), 0) == RatInterval.point(F(0))
    cert = oracle.tail_certificate(Branch.zeros(), effort=8)
    assert cert.interval == RatInterval.point(F(0))


def test_disjoint_sum_adds_bounds_and_certificates():
    left = ClopenOracle(ClopenSet.from_words([(0, 0)]))
    right = ClopenOracle(ClopenSet.from_words([(1, 1)]))
    both = DisjointSumOracle([left, right])
    assert both.measure_bounds() == RatInterval.point(F(1, 2))
    assert both.local_bounds((0,), 0) == RatInterval.point(F(1, 2))
    cert = both.tail_certificate(Branch((1,), (1,)), effort=10)
    assert cert.interval == RatInterval.point(F(1))


def test_grafted_union_requires_incomparable_sites():
    inner = ClopenOracle(ClopenSet.full())
    with pytest.raises(ValueError):
        GraftedUnionOracle([((0,), inner), ((0, 1), inner)])


def _grafted_example() -> GraftedUnionOracle:
    return GraftedUnionOracle(
        [
            ((0, 1), ClopenOracle(piece_of_measure(F(1, 2)))),
            ((1, 0, 0), ClopenOracle(ClopenSet.full())),
        ]
    )


def test_grafted_union_bounds_by_case():
    oracle = _grafted_example()
    # Inside the first graft site: delegate to the inner piece.
    assert oracle.local_bounds((0, 1, 0), 0) == RatInterval.point(F(1))
    assert oracle.local_bounds((0, 1, 1), 0) == RatInterval.point(F(0))
    # Above the sites: scaled sum, exactly.
    assert oracle.local_bounds((), 0) == RatInterval.point(F(1, 8) + F(1, 8))
    assert oracle.local_bounds((1,), 0) == RatInterval.point(F(1, 4))
    # Off every site: empty.
    assert oracle.local_bounds((1, 1), 0) == RatInterval.point(F(0))


def test_grafted_union_certificates():
    oracle = _grafted_example()
    entering = oracle.tail_certificate(Branch((0, 1, 0), (0,)), effort=12)
    assert entering.interval == RatInterval.point(F(1))
    missing = oracle.tail_certificate(Branch((1, 1), (0,)), effort=12)
    assert missing.interval == RatInterval.point(F(0))
    assert missing.start <= 3


def test_spine_prefix_constant_rate_on_spine():
    piece = ClopenOracle(piece_of_measure(F(1, 4)))
    oracle = SpinePrefixOracle(piece, F(1, 4))
    for m in range(8):
        assert oracle.local_bounds((0,) * m, 0) == RatInterval.point(F(1, 4))
    # Beyond the first 1 the piece takes over.
    assert oracle.local_bounds((0, 0, 1, 0, 0), 0) == RatInterval.point(F(1))
    assert oracle.local_bounds((0, 1, 1), 0) == RatInterval.point(F(0))


def test_spine_prefix_certificates():
    piece = ClopenOracle(piece_of_measure(F(1, 4)))
    oracle = SpinePrefixOracle(piece, F(1, 4))
    spine = oracle.tail_certificate(Branch.zeros(), effort=10)
    assert spine.interval == RatInterval.point(F(1, 4))
    assert spine.start == 0
    leaver = oracle.tail_certificate(Branch((0, 0, 1), (0,)), effort=10)
    assert leaver.interval == RatInterval.point(F(1))


def test_classify_converges_on_exact_point():
    piece = ClopenOracle(piece_of_measure(F(1, 4)))
    oracle = SpinePrefixOracle(piece, F(1, 4))
    verdict = oracle.classify(Branch.zeros())
    assert verdict.kind == "converges"
    assert verdict.interval.contains(F(1, 4))
    assert verdict.interval.width <= F(1, 256)


def test_classify_cross_check_rejects_inconsistent_certificate():
    class Lying(MeasureOracle):
        kind = "lying"

        def local_bounds(self, word, budget):
            return RatInterval.point(F(0))

        def tail_certificate(self, point, effort):
            from cantordensity.oracles import TailCertificate

            return TailCertificate(RatInterval.point(F(1)), 0)

    with pytest.raises(RuntimeError):
        Lying().classify(Branch.zeros())


def test_certified_oscillation_detects_alternation():
    low = RatInterval.point(F(0))
    high = RatInterval.point(F(1))
    bounds = [low, high] * 6
    found = certified_oscillation(bounds)
    assert found is not None
    delta, lo_val, hi_val = found
    assert delta == F(1)
    assert lo_val == F(0) and hi_val == F(1)


def test_certified_oscillation_rejects_monotone_runs():
    ramp = [RatInterval.point(F(n, 40)) for n in range(24)]
    assert certified_oscillation(ramp) is None
    # Two swings are not enough for a certificate.
    two = [RatInterval.point(F(0)), RatInterval.point(F(1))] * 2
    assert certified_oscillation(two) is None


def test_bit_at_reads_both_presentations():
    assert bit_at(Branch((), (1,)), 5) == 1
    assert bit_at(interleave_branches(Branch.zeros(), Branch.ones()), 3) == 1
    stretched = StretchedBranch(Branch((), (1, 0)))
    assert stretched.prefix(6) == (1, 0, 0, 1, 1, 1)
    assert bit_at(stretched, 2) == 0


def test_interleave_branches_alternates_the_streams():
    x = Branch((1, 0), (1, 1, 0))
    y = Branch((0,), (0, 1))
    woven = interleave_branches(x, y)
    for n in range(40):
        source = x if n % 2 == 0 else y
        assert woven.at(n) == source.at(n // 2)


def test_from_clopen_is_exact():
    oracle = from_clopen(ClopenSet.from_words([(0,)]))
    assert oracle.local_bounds((0,), 0) == RatInterval.point(F(1))
    assert oracle.local_bounds((1,), 0) == RatInterval.point(F(0))
    assert oracle.local_bounds((), 0) == RatInterval.point(F(1, 2))


def test_compose_grafts_and_complements():
    plain = compose(
        [((0,), from_clopen(ClopenSet.full())), ((1,), from_clopen(ClopenSet.empty()))]
    )
    assert plain.measure_bounds() == RatInterval.point(F(1, 2))
    assert plain.local_bounds((0,), 0) == RatInterval.point(F(1))
    flipped = compose([((0,), from_clopen(ClopenSet.full()))], complemented=True)
    assert flipped.measure_bounds() == RatInterval.point(F(1, 2))
    assert flipped.local_bounds((0, 1), 0) == RatInterval.point(F(0))
    with pytest.raises(ValueError):
        compose([((0,), plain), ((0, 1), plain)])
