import math
from fractions import Fraction

import pytest

from src.interval import Interval


def test_point_encloses_an_inexact_fraction():
    third = Interval.point(Fraction(1, 3))
    assert third.lo < third.hi
    assert Fraction(third.lo) < Fraction(1, 3) < Fraction(third.hi)


def test_point_is_tight_for_dyadic_values():
    assert Interval.point(Fraction(3, 4)) == Interval(0.75, 0.75)


def test_addition_rounds_outward():
    total = Interval.point(0.1) + Interval.point(0.2)
    assert total.lo < 0.1 + 0.2 < total.hi


def test_multiplication_and_square_with_mixed_signs():
    x = Interval(-2.0, 3.0)
    product = x * Interval(-1.0, 1.0)
    assert product.contains(-3.0) and product.contains(3.0)
    square = x.square()
    assert square.lo == 0.0
    assert square.contains(9.0)


def test_subtraction_and_scalars():
    x = Interval(1.0, 2.0)
    assert (x - 1).contains(0.0) and (x - 1).contains(1.0)
    assert (3 - x).contains(1.0) and (3 - x).contains(2.0)
    assert (2 * x).contains(4.0)


def test_hull_widen_and_dict():
    hull = Interval.hull(Interval(0.0, 1.0), Interval(2.0, 3.0))
    assert hull == Interval(0.0, 3.0)
    wide = hull.widen(0.5)
    assert wide.lo < -0.5 + 1e-15 and wide.hi > 3.5 - 1e-15
    assert Interval(1.0, 3.0).to_dict() == {"mid": 2.0, "width": 2.0, "lo": 1.0, "hi": 3.0}


def test_around_and_contains_with_slack():
    x = Interval.around(math.log(2), 1e-12)
    assert x.contains(math.log(2))
    assert not x.contains(0.7)
    assert x.contains(0.7, slack=0.01)


def test_inverted_bounds_are_rejected():
    with pytest.raises(ValueError):
        Interval(1.0, 0.0)
