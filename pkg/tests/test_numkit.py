from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from wittdp.numkit import (
    PowerSeries,
    TwoLocal,
    bernoulli,
    binomial,
    binomial_mod2,
    half_central_mod2,
    is_two_local,
    reduce_two_local,
)


@pytest.mark.parametrize("n,k,expected", [(-2, 0, 1), (4, 2, 6), (-2, 1, -2), (-2, 2, 3), (3, 5, 0), (-1, 7, -1)])
def test_binomial_examples(n, k, expected):
    assert binomial(n, k) == expected


def test_binomial_rejects_negative_k():
    with pytest.raises(ValueError):
        binomial(3, -1)


@given(st.integers(0, 60), st.integers(0, 60))
def test_binomial_agrees_with_math_comb(n, k):
    assert binomial(n, k) == comb(n, k)


def test_binomial_pascal():
    for n in range(-20, 21):
        for k in range(1, 21):
            assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)


def test_binomial_negative_upper_sign_rule():
    # C(-n, k) = (-1)^k C(n+k-1, k)
    for n in range(1, 12):
        for k in range(12):
            assert binomial(-n, k) == (-1) ** k * comb(n + k - 1, k)


@pytest.mark.parametrize("n,k,expected", [(5, 1, 1), (10, 2, 1), (10, 3, 0), (7, 7, 1), (0, 0, 1)])
def test_binomial_mod2_examples(n, k, expected):
    assert binomial_mod2(n, k) == expected


def test_binomial_mod2_ten_two_against_direct_value():
    assert comb(10, 2) == 45
    assert binomial_mod2(10, 2) == comb(10, 2) % 2


def test_binomial_mod2_exhaustive_against_exact():
    for n in range(257):
        for k in range(257):
            assert binomial_mod2(n, k) == comb(n, k) % 2


@pytest.mark.parametrize("r", range(1, 9))
def test_binomial_mod2_power_of_two_row(r):
    n = 2**r
    assert all(binomial_mod2(n, j) == 0 for j in range(1, n))
    assert binomial_mod2(n, 0) == binomial_mod2(n, n) == 1


@given(st.integers(0, 6), st.integers(0, 200), st.integers(0, 200))
def test_binomial_mod2_doubling_invariance(i, u, v):
    assert binomial_mod2(2**i * u, 2**i * v) == binomial_mod2(u, v)


@pytest.mark.parametrize("n,expected", [(1, 1), (2, 1), (3, 0), (4, 1), (5, 0), (6, 0), (8, 1)])
def test_half_central_mod2_examples(n, expected):
    assert half_central_mod2(n) == expected


def test_half_central_mod2_is_power_of_two_indicator():
    for n in range(1, 300):
        direct = (comb(2 * n, n) // 2) % 2
        assert half_central_mod2(n) == direct
        assert direct == (1 if n & (n - 1) == 0 else 0)


def test_half_central_mod2_rejects_zero():
    with pytest.raises(ValueError):
        half_central_mod2(0)


@pytest.mark.parametrize("q,k,expected", [
    (Fraction(1, 3), 1, 1),
    (Fraction(2, 15), 1, 0),
    (Fraction(4, 3), 2, 0),
    (Fraction(-1, 3), 2, 1),
    (Fraction(-2, 3), 2, 2),
    (Fraction(5), 3, 5),
])
def test_reduce_two_local_examples(q, k, expected):
    assert reduce_two_local(q, k) == expected


def test_reduce_two_local_rejects_even_denominator():
    with pytest.raises(ValueError):
        reduce_two_local(Fraction(1, 2), 2)


@given(st.integers(-10**6, 10**6), st.integers(0, 10**4).map(lambda d: 2 * d + 1), st.integers(1, 12))
def test_reduce_two_local_is_an_inverse_residue(a, b, k):
    r = reduce_two_local(Fraction(a, b), k)
    q = Fraction(a, b)
    assert 0 <= r < 2**k
    assert (r * q.denominator - q.numerator) % 2**k == 0


def test_is_two_local():
    assert is_two_local(Fraction(-1, 3))
    assert is_two_local(7)
    assert not is_two_local(Fraction(1, 6))


def test_two_local_rejects_even_denominator():
    with pytest.raises(ValueError):
        TwoLocal(1, 4)


odd_fractions = st.builds(
    lambda a, b: TwoLocal(a, 2 * b + 1), st.integers(-1000, 1000), st.integers(0, 500)
)


@given(odd_fractions, odd_fractions)
def test_two_local_closed_under_ring_operations(x, y):
    for z in (x + y, x - y, x * y, -x, x**3, x + 1, 2 * y, 3 - x):
        assert isinstance(z, TwoLocal)
        assert z.denominator % 2 == 1


def test_two_local_division_leaves_the_ring():
    z = TwoLocal(1, 3) / 2
    assert not isinstance(z, TwoLocal)
    assert z == Fraction(1, 6)


@pytest.mark.parametrize("m,expected", [(0, Fraction(1)), (2, Fraction(1, 6)), (4, Fraction(-1, 30)),
                                        (6, Fraction(1, 42)), (12, Fraction(-691, 2730))])
def test_bernoulli_examples(m, expected):
    assert bernoulli(m) == expected


@pytest.mark.parametrize("m", [1, 3, 5, -2])
def test_bernoulli_rejects_odd_or_negative(m):
    with pytest.raises(ValueError):
        bernoulli(m)


def test_bernoulli_matches_generating_function():
    # t / (e^t - 1) = sum B_m t^m / m!, with e^t - 1 = t * (sum t^k / (k+1)!)
    order = 20
    g = PowerSeries([Fraction(1, factorial(k + 1)) for k in range(order + 1)])
    inv = g.inverse()
    for m in range(0, order + 1, 2):
        assert inv[m] * factorial(m) == bernoulli(m)


def test_power_series_sin_cos_identity():
    s, c = PowerSeries.sin(15), PowerSeries.cos(15)
    assert s * s + c * c == PowerSeries.constant(1, 15)


def test_power_series_inverse_and_division():
    c = PowerSeries.cos(12)
    assert c * c.inverse() == PowerSeries.constant(1, 12)
    tan = PowerSeries.sin(12) / c
    assert [tan[k] for k in range(8)] == [0, 1, 0, Fraction(1, 3), 0, Fraction(2, 15), 0, Fraction(17, 315)]


def test_power_series_inverse_needs_unit():
    with pytest.raises(ZeroDivisionError):
        PowerSeries.variable(5).inverse()


def test_power_series_length_and_mixed_order():
    a = PowerSeries([1, 2, 3, 4], order=3)
    b = PowerSeries([1, 1], order=6)
    assert len(a) == 4 and len(b) == 7
    assert (a + b).order == 3
    assert (a * b).order == 3
    assert [(a * b)[k] for k in range(4)] == [1, 3, 5, 7]


small_fractions = st.builds(Fraction, st.integers(-50, 50), st.integers(1, 20))
series = st.lists(small_fractions, min_size=1, max_size=8)


@given(series, series, series)
def test_power_series_ring_laws(a, b, c):
    order = 7
    A, B, C = (PowerSeries(x, order) for x in (a, b, c))
    assert A * B == B * A
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C
    assert A - A == PowerSeries.constant(0, order)


def test_power_series_pow():
    x = PowerSeries.variable(6)
    one_plus = x + 1
    assert [(one_plus**5)[k] for k in range(7)] == [comb(5, k) for k in range(6)] + [0]
    assert one_plus**0 == PowerSeries.constant(1, 6)
