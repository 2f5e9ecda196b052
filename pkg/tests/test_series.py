from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from neron.polycore import PolyRing
from neron.series import (
    EXP,
    FACT,
    AtLeast,
    NonUnitError,
    PrecisionError,
    TruncatedSeries,
    series_inverse,
    series_order,
    series_sqrt,
    valuation,
)

from conftest import u_series

X = PolyRing(("x",))


def S(coeffs, n):
    return TruncatedSeries.from_coeffs(coeffs, n)


def test_products():
    assert S([1, 1], 3) * S([1, -1], 3) == S([1, 0, -1], 3)
    u1, u2, _, _ = u_series(12)
    assert u2 * u2 == u1 ** 3


def test_inverse():
    assert series_inverse(S([1, -1], 4)) == S([1, 1, 1, 1], 4)
    assert series_inverse(EXP(3)) == S([1, -1, Fraction(1, 2)], 3)
    with pytest.raises(NonUnitError):
        series_inverse(S([0, 1, 1], 5))


def test_sqrt():
    assert series_sqrt(S([1], 4)) == S([1], 4)
    assert series_sqrt(S([1, 2, 1], 5)) == S([1, 1], 5)
    u1 = EXP(8)
    assert series_sqrt(u1 ** 3) ** 2 == u1 ** 3
    with pytest.raises(ValueError):
        series_sqrt(S([4, 1], 3))


def test_orders():
    _, u2, _, _ = u_series(10)
    assert series_order(u2.shift(3)) == 3
    assert series_order(S([], 10)) == AtLeast(10)
    u1, u2, v1, v2 = u_series(12)
    val = (u1 * u1 * v2 * 6 + u1 * u2 * v1 * 12).shift(5)
    assert series_order(val) == 5
    assert (val.coeffs[5]) == 21


def test_at_least_refuses_undecided_comparisons():
    a = AtLeast(10)
    assert a >= 7 and a > 9 and not a < 9
    with pytest.raises(PrecisionError):
        a < 12
    with pytest.raises(PrecisionError):
        a == 11
    assert valuation(X.var("x") ** 12, 10) == AtLeast(10)


def test_generators():
    assert EXP(4) == S([1, 1, Fraction(1, 2), Fraction(1, 6)], 4)
    assert FACT(4) == S([1, 1, 2, 6], 4)


def test_precision_is_explicit():
    s = S([1, 0, 0], 3)
    assert s.precision == 3 and len(s.coeffs) == 3
    assert (S([1, 2, 3], 3) + S([1], 2)).precision == 2
    with pytest.raises(PrecisionError):
        S([1], 2).truncate(3)


coef = st.fractions(min_value=-4, max_value=4, max_denominator=3)


def series(n=8, unit=False, const_one=False):
    def build(cs):
        cs = list(cs)
        if const_one:
            cs[0] = Fraction(1)
        elif unit and cs[0] == 0:
            cs[0] = Fraction(1)
        return S(cs, n)
    return st.lists(coef, min_size=n, max_size=n).map(build)


@given(series(), series(), series())
def test_mul_commutative_associative(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)


@given(series(unit=True))
def test_double_inverse(a):
    assert series_inverse(series_inverse(a)) == a
    assert a * series_inverse(a) == S([1], a.precision)


@given(series(const_one=True))
def test_sqrt_squares_back(a):
    assert series_sqrt(a) ** 2 == a


@given(series(), series())
def test_order_of_products(a, b):
    oa, ob = series_order(a), series_order(b)
    if isinstance(oa, AtLeast) or isinstance(ob, AtLeast) or oa + ob >= a.precision:
        return
    assert series_order(a * b) == oa + ob


@given(series(), series())
def test_polynomial_round_trip_commutes_with_mul(a, b):
    pa, pb = a.to_polynomial(X), b.to_polynomial(X)
    assert TruncatedSeries.from_polynomial(pa, 8) == a
    assert TruncatedSeries.from_polynomial(pa * pb, 8) == a * b
