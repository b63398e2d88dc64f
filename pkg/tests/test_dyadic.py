import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from aidepth.dyadic import DyadicRational, ceil_log2, floor_log2, log2

positive = st.fractions(min_value=Fraction(1, 10**30), max_value=10**30).filter(lambda q: q > 0)


@given(positive)
def test_floor_log2_brackets_value(q):
    e = floor_log2(q)
    assert Fraction(2) ** e <= q < Fraction(2) ** (e + 1)


@given(positive)
def test_ceil_log2_brackets_value(q):
    e = ceil_log2(q)
    assert Fraction(2) ** (e - 1) < q <= Fraction(2) ** e


@pytest.mark.parametrize(
    "q, expected",
    [(Fraction(11, 128), -4), (Fraction(1, 256), -8), (Fraction(10, 11), -1), (1, 0), (Fraction(11, 10), 0), (8, 3)],
)
def test_floor_log2_values(q, expected):
    assert floor_log2(q) == expected


def test_floor_log2_rejects_nonpositive():
    with pytest.raises(ValueError):
        floor_log2(0)


def test_log2_handles_huge_rationals():
    q = Fraction(3, 2**5000)
    assert log2(q) == pytest.approx(math.log2(3) - 5000)


def test_dyadic_canonical_form():
    assert DyadicRational(44, 9) == DyadicRational(11, 7)
    assert (DyadicRational(44, 9).numerator, DyadicRational(44, 9).exponent) == (11, 7)
    assert DyadicRational(0, 12).exponent == 0
    assert str(DyadicRational(44, 9)) == "11/2^7"


@given(st.integers(0, 2**40), st.integers(0, 60), st.integers(0, 2**40), st.integers(0, 60))
def test_dyadic_add_and_order_match_fractions(n1, e1, n2, e2):
    a, b = DyadicRational(n1, e1), DyadicRational(n2, e2)
    fa, fb = Fraction(n1, 2**e1), Fraction(n2, 2**e2)
    assert (a + b).to_fraction() == fa + fb
    assert (a < b) == (fa < fb)
    assert (a == b) == (fa == fb)
    assert DyadicRational.parse(str(a)) == a


def test_from_fraction_rejects_non_dyadic():
    assert DyadicRational.from_fraction(Fraction(5, 64)) == DyadicRational(5, 6)
    with pytest.raises(ValueError):
        DyadicRational.from_fraction(Fraction(1, 3))
