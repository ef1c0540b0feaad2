from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import interval_sets, positive_eps
from lusinlp.borel import (
    CompactSet,
    DyadicCover,
    IntervalSet,
    complement,
    dyadic_cover,
    dyadic_level_error,
    inner_compact,
    intersect,
    measure,
    outer_open,
    symm_diff,
    union,
)


def I(lo, hi):
    return IntervalSet.interval(F(lo), F(hi))


def brute_symm(a_pieces, b_pieces, denom):
    """Symmetric difference measure by counting 1/denom cells."""
    def cells(pieces):
        out = set()
        for lo, hi in pieces:
            out |= set(range(int(lo * denom), int(hi * denom)))
        return out
    return F(len(cells(a_pieces) ^ cells(b_pieces)), denom)


class TestAlgebra:
    def test_adjacent_merge(self):
        assert union(I(0, F(1, 2)), I(F(1, 2), 1)) == IntervalSet.full()

    def test_self_symm_diff_empty(self):
        A = I(F(1, 5), F(2, 3))
        assert symm_diff(A, A) == IntervalSet.empty()

    def test_symm_diff_example(self):
        got = symm_diff(I(0, F(1, 3)), I(F(1, 4), F(1, 2)))
        assert got == IntervalSet.of([(0, F(1, 4)), (F(1, 3), F(1, 2))])

    def test_measure_examples(self):
        assert measure(IntervalSet.empty()) == 0
        assert measure(IntervalSet.of([(0, F(1, 4)), (F(1, 2), 1)])) == F(3, 4)
        assert measure(symm_diff(I(0, F(1, 3)), I(0, F(21, 64)))) == F(1, 192)

    @given(interval_sets(), interval_sets())
    def test_laws(self, A, B):
        assert symm_diff(A, A) == IntervalSet.empty()
        assert measure(union(A, B)) + measure(intersect(A, B)) == measure(A) + measure(B)
        assert complement(complement(A)) == A
        assert measure(symm_diff(A, B)) == brute_symm(A.pieces, B.pieces, 96)

    @given(interval_sets(), interval_sets(), interval_sets())
    def test_associative(self, A, B, C):
        assert union(union(A, B), C) == union(A, union(B, C))
        assert intersect(A, union(B, C)) == union(intersect(A, B), intersect(A, C))

    def test_invalid_pieces_rejected(self):
        with pytest.raises(ValueError):
            IntervalSet(((F(1, 2), F(1, 4)),))
        with pytest.raises(ValueError):
            IntervalSet(((F(0), F(1, 2)), (F(1, 2), F(1))))

    def test_parse_and_json_round_trip(self):
        A = IntervalSet.parse("[0, 1/3) u [1/2, 0.75)")
        assert A == IntervalSet.of([(0, F(1, 3)), (F(1, 2), F(3, 4))])
        assert IntervalSet.from_json(A.to_json()) == A
        assert IntervalSet.parse("{}") == IntervalSet.empty()

    def test_contains(self):
        A = I(F(1, 4), F(1, 2))
        assert A.contains(F(1, 4)) and not A.contains(F(1, 2))


class TestRegularity:
    def test_inner_examples(self):
        assert inner_compact(IntervalSet.empty(), F(1, 10)) == CompactSet.empty()
        K = inner_compact(I("0.25", "0.75"), F(1, 10))
        assert K == CompactSet.of([(F(1, 4), F(37, 50))])
        assert F(1, 2) - K.measure < F(1, 10)
        K2 = inner_compact(IntervalSet.of([(0, F(1, 2)), (F(3, 4), 1)]), F(2, 100))
        assert len(K2) == 2 and K2.measure > F(73, 100)

    def test_outer_examples(self):
        assert outer_open(IntervalSet.empty(), F(1, 10)) == IntervalSet.empty()
        U = outer_open(I("0.2", "0.6"), F(1, 10))
        assert U == I("0.18", "0.62")
        assert U.measure - F(2, 5) < F(1, 10)
        assert outer_open(IntervalSet.full(), F(1, 10)) == IntervalSet.full()

    @given(interval_sets(), positive_eps)
    def test_sandwich(self, A, d):
        K = inner_compact(A, d)
        U = outer_open(A, d)
        for lo, hi in K.pieces:
            assert any(a <= lo and hi < b for a, b in A.pieces)
        assert intersect(A, U) == A
        assert measure(A) - measure(K) < d
        assert measure(U) - measure(A) < d
        gap = K.min_gap()
        assert gap is None or gap > 0

    def test_nonpositive_delta(self):
        with pytest.raises(ValueError):
            inner_compact(I(0, 1), 0)
        with pytest.raises(ValueError):
            outer_open(I(0, 1), -1)


def oracle_cover(A: IntervalSet, eps):
    """Exhaustive level search with integer arithmetic over a common grid."""
    from math import lcm

    D = 1
    for lo, hi in A.pieces:
        D = lcm(D, lo.denominator, hi.denominator)
    level = 0
    while True:
        scale = D * 2**level
        cell = D  # each cell is D units of 1/scale
        cover = [0] * 2**level
        for lo, hi in A.pieces:
            a, b = int(lo * scale), int(hi * scale)
            for k in range(a // cell, min((b - 1) // cell, 2**level - 1) + 1):
                cover[k] += min(b, (k + 1) * cell) - max(a, k * cell)
        err = sum(min(c, cell - c) for c in cover)
        if F(err, scale) < eps:
            cells = frozenset(k for k, c in enumerate(cover) if 2 * c > cell)
            return level, cells, F(err, scale)
        level += 1


class TestDyadic:
    def test_examples(self):
        c = dyadic_cover(I(0, F(1, 2)), F(1, 10))
        assert (c.level, c.selected) == (1, frozenset({0}))
        c = dyadic_cover(I(0, F(1, 3)), F(1, 100))
        assert c.level == 6 and c.selected == frozenset(range(21))
        assert measure(symm_diff(I(0, F(1, 3)), c.as_intervalset())) == F(1, 192)
        c = dyadic_cover(IntervalSet.empty(), F(1, 2))
        assert c.level == 0 and not c.selected

    def test_bad_eps(self):
        with pytest.raises(ValueError):
            dyadic_cover(I(0, 1), 0)

    @given(interval_sets(denom=60), st.sampled_from([F(1, 10), F(1, 100), F(1, 1000)]))
    def test_matches_oracle(self, A, eps):
        c = dyadic_cover(A, eps)
        level, cells, err = oracle_cover(A, eps)
        assert (c.level, c.selected) == (level, cells)
        assert measure(symm_diff(A, c.as_intervalset())) == err < eps

    @given(st.integers(0, 200), st.integers(1, 200), st.integers(0, 10))
    def test_single_interval_rate(self, a, length, n):
        lo = F(a, 401)
        A = I(lo, min(lo + F(length, 401), F(1)))
        assert dyadic_level_error(A, n) < F(2, 2**n)

    @given(interval_sets())
    def test_error_nonincreasing(self, A):
        errs = [dyadic_level_error(A, n) for n in range(9)]
        assert all(b <= a for a, b in zip(errs, errs[1:]))

    def test_cover_type(self):
        c = DyadicCover.from_cells(3, [0, 1, 5])
        assert c.as_intervalset() == IntervalSet.of([(0, F(1, 4)), (F(5, 8), F(3, 4))])
        with pytest.raises(ValueError):
            DyadicCover.from_cells(2, [4])
