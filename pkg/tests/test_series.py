from __future__ import annotations

from fractions import Fraction
from functools import reduce

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cactus_split.errors import OrderMismatchError
from cactus_split.series import PowerSeries, arithmetic, pow, scale, substitute_power


def ps(cs, n):
    return PowerSeries(cs, n)


def small_series(order=8):
    return st.lists(st.integers(-5, 5), min_size=order + 1, max_size=order + 1).map(lambda c: PowerSeries(c, order))


def test_arithmetic_examples():
    a = ps([1, 1], 2)
    assert arithmetic(a, a, "mul") == ps([1, 2, 1], 2)
    assert arithmetic(a, PowerSeries.one(2), "mul") == a
    assert arithmetic(ps([0, 1, 1], 2), ps([0, 1], 2), "sub") == ps([0, 0, 1], 2)


def test_order_mismatch():
    with pytest.raises(OrderMismatchError):
        ps([1], 2) + ps([1], 3)


def test_pow_examples():
    x = PowerSeries.monomial(1, 4)
    assert pow(x, 3) == PowerSeries.monomial(3, 4)
    assert pow(ps([1, 1], 2), 2) == ps([1, 2, 1], 2)
    a = ps([3, 0, 2], 2)
    assert pow(a, 1) == a
    assert pow(a, 0) == PowerSeries.one(2)


def test_substitute_power_examples():
    assert substitute_power(ps([0, 1, 1], 4), 2) == ps([0, 0, 1, 0, 1], 4)
    a = ps([1, 2, 3], 2)
    assert substitute_power(a, 1) == a
    assert substitute_power(ps([1, 1], 2), 3) == PowerSeries.one(2)


def test_scale_examples():
    x3 = PowerSeries.monomial(3, 3)
    assert scale(x3, Fraction(1, 3))[3] == Fraction(1, 3)
    a = ps([1, 2, 3], 2)
    assert scale(a, 0).is_zero
    assert scale(a, 1) == a


def test_rationals_stay_reduced():
    a = scale(ps([2, 4], 1), Fraction(1, 2))
    assert a.is_integral and a.integers() == [1, 2]


@given(small_series(), small_series(), small_series())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(small_series(12), st.integers(1, 4), st.integers(1, 4))
def test_substitution_composes(a, j, k):
    assert substitute_power(substitute_power(a, j), k) == substitute_power(a, j * k)


@given(small_series(6), st.integers(0, 6))
def test_pow_is_folded_mul(a, m):
    assert pow(a, m) == reduce(lambda s, _: s * a, range(m), PowerSeries.one(6))
