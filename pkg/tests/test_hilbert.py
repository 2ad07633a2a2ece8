import math
from fractions import Fraction

import pytest

from src.errors import PreconditionError
from src.hilbert import (WeightedSpace, class_weight_sum, inner_truncated, periodic_norm_sq, tail_term,
                         total_weight, weight)
from src.interval import Interval


def test_weights_telescope():
    assert weight(1) == Fraction(1, 2)
    assert total_weight(3) == Fraction(3, 4)
    assert sum(weight(i) for i in range(1, 11)) == total_weight(10)


def test_inner_truncated_exact_and_float():
    ones = [1] * 5
    assert inner_truncated(ones, ones, 3) == Fraction(3, 4)
    assert inner_truncated([1.0] * 5, ones, 5) == pytest.approx(5 / 6, rel=1e-15)
    with pytest.raises(PreconditionError):
        inner_truncated(ones, ones, 6)
    with pytest.raises(PreconditionError):
        inner_truncated(ones, [1, 1], 2)


def test_odd_class_sum_is_log_two():
    s = class_weight_sum(1, 2)
    assert s.contains(math.log(2))
    assert abs(s.mid - math.log(2)) <= 1e-8
    assert s.width <= 1e-9


def test_class_sum_against_direct_summation():
    j, L = 3, 5
    direct = math.fsum(1.0 / (i * (i + 1)) for i in range(j, j + 200_000 * L, L))
    # the omitted tail is below 1 / (L * (j + 200000 L))
    assert class_weight_sum(j, L).contains(direct, slack=1e-6)


@pytest.mark.parametrize("L", [2, 6, 12])
def test_class_sums_partition_the_unit_mass(L):
    total = sum(WeightedSpace().class_sums(L), Interval(0.0, 0.0))
    assert total.contains(1.0, slack=L * 1e-10)


@pytest.mark.parametrize("L", [1, 2, 6, 12, 60])
def test_tail_term_below_basel_bound(L):
    assert tail_term(L).hi <= math.pi ** 2 / (6 * L * L)


def test_tail_of_period_two_is_one_minus_log_two():
    assert tail_term(2).contains(1 - math.log(2))


@pytest.mark.parametrize("j,L", [(1, 2), (5, 6), (7, 12), (1, 60)])
def test_class_sum_upper_bound(j, L):
    assert class_weight_sum(j, L).hi <= float(weight(j) * Fraction(j + L, L)) * (1 + 1e-12)


def test_single_class_is_everything():
    assert class_weight_sum(1, 1) == Interval(1.0, 1.0)


def test_periodic_norm_of_constant_sequence():
    assert periodic_norm_sq([1, 1, 1]).contains(1.0, slack=1e-9)
    assert periodic_norm_sq([0, 0, 1]).contains(tail_term(3).mid)


def test_cache_returns_the_same_interval():
    space = WeightedSpace(tol=1e-8)
    first = space.class_weight_sum(2, 6)
    assert space.class_weight_sum(2, 6) is first
    # a tighter tolerance is a different cache entry
    assert space.class_weight_sum(2, 6, tol=1e-12).width <= first.width


def test_invalid_class_arguments():
    with pytest.raises(PreconditionError):
        class_weight_sum(0, 2)
    with pytest.raises(PreconditionError):
        class_weight_sum(3, 2)
    with pytest.raises(PreconditionError):
        WeightedSpace(tol=-1.0)


def test_inner_truncated_with_a_zero_entry():
    gamma = [Fraction(1, 2), 0, Fraction(1, 2)]
    assert inner_truncated(gamma, gamma, 3) == Fraction(7, 48)
    assert inner_truncated([1], [1], 1) == Fraction(1, 2)


@pytest.mark.parametrize("j,L", [(1, 1), (1, 2), (2, 2), (3, 5), (6, 6), (11, 12), (60, 60)])
def test_class_sum_covers_its_leading_weight(j, L):
    assert class_weight_sum(j, L).lo >= float(weight(j))


def _periodic(r, N):
    return [r[(i - 1) % len(r)] for i in range(1, N + 1)]


@pytest.mark.parametrize("r", [[1, 1, 1], [Fraction(1, 2), 0, Fraction(-1, 3)], [0, 2, 0, -1, 1, Fraction(3, 7)]])
def test_periodic_norm_bounds_every_truncation(r):
    full = periodic_norm_sq(r)
    for N in (1, len(r), 10 * len(r), 500):
        x = _periodic(r, N)
        truncated = inner_truncated(x, x, N)
        assert float(truncated) <= full.hi
        assert truncated <= max(abs(v) for v in r) ** 2
