from __future__ import annotations

from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from printed_values import TANGENT_ROWS_0_TO_9
from wittdp.numkit import PowerSeries, bernoulli
from wittdp.tangent import (
    CONVENTIONS,
    TangentTable,
    bernoulli_identity_check,
    bernoulli_rhs,
    build_table,
    discover_bernoulli_convention,
    series_oracle,
)
from wittdp.verify import REFERENCE_TANGENT_ROWS


def test_reference_table_has_26_nonzero_entries():
    assert len(TANGENT_ROWS_0_TO_9) == 26


def test_rows_0_to_9_match_reference_entrywise():
    t = build_table(9)
    for n in range(10):
        for i in range(n + 1):
            assert t(n, i) == TANGENT_ROWS_0_TO_9.get((n, i), 0), (n, i)


def test_library_reference_copy_agrees():
    for n, row in enumerate(REFERENCE_TANGENT_ROWS):
        for i, v in enumerate(row):
            assert v == TANGENT_ROWS_0_TO_9.get((n, i), 0)


@pytest.mark.parametrize("n,i,v", [(7, 3, 616), (9, 1, 7936), (2, 2, 1), (8, 2, 3968)])
def test_build_table_examples(n, i, v):
    assert build_table(9)(n, i) == v


@pytest.mark.parametrize("n,i,v", [(3, 1, 2), (5, 1, 16), (6, 2, 136)])
def test_series_oracle_examples(n, i, v):
    assert series_oracle(9)(n, i) == v


def test_series_oracle_reads_tangent_coefficients():
    # tan t = t + t^3/3 + 2t^5/15 + 17t^7/315 + ...
    o = series_oracle(7)
    assert [Fraction(o(n, 1), factorial(n)) for n in range(8)] == [
        0, 1, 0, Fraction(1, 3), 0, Fraction(2, 15), 0, Fraction(17, 315)
    ]


def test_recurrence_equals_series_oracle_up_to_24():
    assert build_table(24) == series_oracle(24)


def test_oracle_via_derivative_identity():
    # independent third path: tan' = 1 + tan^2, integrated term by term
    order = 16
    tan = PowerSeries.constant(0, order)
    for _ in range(order + 1):
        d = PowerSeries.constant(1, order) + tan * tan
        tan = PowerSeries([0] + [d[k] / (k + 1) for k in range(order)], order)
    t = build_table(order)
    for n in range(order + 1):
        assert tan[n] * factorial(n) == t(n, 1)


@given(st.integers(0, 30))
@settings(max_examples=15, deadline=None)
def test_table_shape_invariants(N):
    t = build_table(N)
    for n in range(N + 1):
        assert t(n, n) == 1
        assert t(n, 0) == (1 if n == 0 else 0)
        for i in range(n + 1):
            assert t(n, i) >= 0
            if (n - i) % 2:
                assert t(n, i) == 0


def test_table_outside_triangle():
    t = build_table(4)
    assert t(3, 5) == 0 and t(3, -1) == 0
    with pytest.raises(IndexError):
        t(5, 1)


def test_table_validates_shape():
    with pytest.raises(ValueError):
        TangentTable(1, ((1,),))


def test_with_entry_is_a_copy():
    t = build_table(8)
    bad = t.with_entry(7, 3, 617)
    assert bad(7, 3) == 617 and t(7, 3) == 616
    assert bad != t


def test_bernoulli_rhs_small_values():
    assert [bernoulli_rhs(n) for n in range(1, 5)] == [1, 2, 16, 272]


def test_printed_index_fails_at_one():
    # with the row index 2n+1 the expression gives 1 at n = 1, but T(3,1) = 2
    assert bernoulli_rhs(1) == 1
    assert build_table(3)(3, 1) == 2
    assert not bernoulli_identity_check(1, convention="T(2n+1,1)")


def test_shifted_index_reproduces_column_one():
    t = build_table(17)
    for n in range(1, 9):
        assert bernoulli_identity_check(n, t, "T(2n-1,1)")
    assert bernoulli_rhs(2) == t(3, 1) == 2
    assert bernoulli_rhs(4) == t(7, 1) == 272


def test_bernoulli_rhs_uses_even_indices_only():
    for n in range(1, 9):
        q = 4**n
        assert bernoulli_rhs(n) == (-1) ** (n - 1) * bernoulli(2 * n) * q * (q - 1) / (2 * n)


def test_convention_discovery_outcome():
    found = discover_bernoulli_convention(8)
    assert found["matching"] == ["T(2n-1,1)"]
    assert found["printed_index_matches"] is False
    assert all(found["matches"]["T(2n-1,1)"])
    assert not any(found["matches"]["T(2n+1,1)"])
    assert set(found["matches"]) == set(CONVENTIONS)


def test_convention_discovery_sees_a_corrupted_table():
    bad = build_table(17).with_entry(7, 1, 273)
    found = discover_bernoulli_convention(8, bad)
    assert found["matching"] == []
