from __future__ import annotations

import random
import threading
from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings, strategies as st

from printed_values import GAMMA_ROWS, GAMMA_ROWS_MOD2
from wittdp.fields import FieldTower
from wittdp.gw import DiagonalForm, GWElement, lambda_powers
from wittdp.numkit import PowerSeries, reduce_two_local
from wittdp.lambda_universal import (
    GammaCoeffTable,
    IntegrityError,
    LambdaVector,
    LambdaVector2,
    gamma_coeffs_closed,
    gamma_coeffs_mod2,
    gamma_coeffs_recurrence,
    gamma_table,
    lambda2,
    lambda2_basis,
    lambda_of_sum,
    mul_basis,
    verify_axiom2,
    verify_axiom4,
)
from wittdp.tangent import build_table

L = LambdaVector.basis


def lv(**terms):
    return LambdaVector({int(k[1:]): Fraction(v) for k, v in terms.items()})


# -- products in the universal ring ------------------------------------------


@pytest.mark.parametrize("i", range(0, 12))
def test_mul_by_x(i):
    expected = L(i + 1) * (i + 1) - L(i - 1) * (i - 1) if i >= 1 else L(1)
    assert mul_basis(1, i) == expected


@pytest.mark.parametrize("a", range(8))
def test_mul_by_lambda0(a):
    assert mul_basis(a, 0) == L(a) == mul_basis(0, a)


def test_mul_2_2():
    assert mul_basis(2, 2) == L(4) * 6 - L(2) * 4


def test_vector_products():
    assert L(1) * L(1) == L(2) * 2
    assert LambdaVector() * L(3) == LambdaVector()
    u = L(2) * 3 + L(1)
    assert L(0) * u == u


def test_lambda_vector_drops_zero_coefficients():
    v = LambdaVector({1: 0, 2: Fraction(1, 3)})
    assert list(v) == [2]
    assert (v - v) == LambdaVector()


def test_mul_associative_and_commutative():
    for a in range(16):
        for b in range(16 - a):
            assert mul_basis(a, b) == mul_basis(b, a)
            for c in range(16 - a - b):
                assert (L(a) * L(b)) * L(c) == L(a) * (L(b) * L(c)), (a, b, c)


def test_mul_basis_has_integer_coefficients():
    for a in range(12):
        for b in range(12):
            assert all(c.denominator == 1 for c in mul_basis(a, b).values())


# test oracle: the product rule against honest exterior powers of a concrete
# rank-0 element of a group ring with 16 square classes
def test_mul_basis_against_concrete_exterior_powers():
    tower = FieldTower(13, 3)
    classes = list(tower.classes())
    rng = random.Random(7)
    for _ in range(6):
        k = rng.randint(1, 5)
        p = DiagonalForm(tower, tuple(rng.choice(classes) for _ in range(k)))
        q = DiagonalForm(tower, tuple(rng.choice(classes) for _ in range(k)))
        lam = lambda_powers(p.to_gw() - q.to_gw(), 12)
        for a in range(6):
            for b in range(6):
                rhs = GWElement.zero(tower)
                for i, c in mul_basis(a, b).items():
                    rhs = rhs + lam[i] * c
                assert lam[a] * lam[b] == rhs, (a, b)


def test_lambda2_basis_examples():
    assert lambda2_basis(1) == L(2)
    assert lambda2_basis(2) == L(4) * 3 - L(2) * 2


def test_lambda2_basis_against_concrete_exterior_powers():
    tower = FieldTower(5, 2)
    phi = DiagonalForm(tower, (tower.t(1), tower.base_nonsquare(), tower.t(2)))
    psi = DiagonalForm(tower, (tower.one(), tower.one(), tower.t(1) * tower.t(2)))
    lam = lambda_powers(phi.to_gw() - psi.to_gw(), 10)
    for a in range(1, 5):
        inner = lambda_powers(lam[a], 2)[2]
        rhs = GWElement.zero(tower)
        for i, c in lambda2_basis(a).items():
            rhs = rhs + lam[i] * c
        assert inner == rhs, a


@pytest.mark.parametrize("r", range(0, 5))
def test_lambda2_of_power_of_two_mod2(r):
    assert lambda2_basis(2**r).mod2() == {2 ** (r + 1)}


def test_lambda2_basis_rejects_scalar():
    with pytest.raises(ValueError):
        lambda2_basis(0)


def test_lambda2_examples():
    assert lambda2(L(1)) == L(2)
    assert lambda2(L(1) * 2) == L(2) * 4
    assert lambda2(L(1) + L(2)) == L(2) + mul_basis(1, 2) + lambda2_basis(2)
    with pytest.raises(ValueError):
        lambda2(L(0) + L(1))


@given(st.integers(-6, 6), st.integers(-6, 6))
def test_lambda2_sum_rule_integer_scalars(c, d):
    # lambda^2(u + v) = lambda^2(u) + uv + lambda^2(v)
    u, v = L(1) * c, L(3) * d
    assert lambda2(u + v) == lambda2(u) + u * v + lambda2(v)


@given(st.integers(-5, 5))
def test_lambda2_scaling_on_ideal(c):
    # psi^2 = 0 on the ideal makes lambda^2(c x) = c^2 lambda^2(x)
    assert lambda2(L(1) * c) == L(2) * (c * c)


# -- coefficient tables -----------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_printed_rows(n):
    table = gamma_coeffs_closed(4, build_table(4))
    assert table.rows()[n] == GAMMA_ROWS[n]
    assert gamma_coeffs_recurrence(4).rows()[n] == GAMMA_ROWS[n]


def test_closed_form_examples():
    table = gamma_coeffs_closed(5, build_table(5))
    assert table(3, 1) == Fraction(-1, 3)
    assert table(5, 1) == Fraction(2, 15)
    assert table(5, 3) == -1
    assert table(2, 0) == 0
    assert all(table(n, n) == 1 for n in range(6))


def test_row_5_and_6():
    table = gamma_coeffs_recurrence(6)
    assert table.row(5) == L(5) - L(3) + L(1) * Fraction(2, 15)
    assert table.row(6) == L(6) - L(4) * Fraction(4, 3) + L(2) * Fraction(17, 45)


def test_recurrence_equals_closed_form_to_40():
    rec = gamma_coeffs_recurrence(40)
    assert rec == gamma_coeffs_closed(40, build_table(40))
    for n, row in enumerate(rec.rows()):
        for i, c in row.items():
            assert c.denominator % 2 == 1
            assert (n - i) % 2 == 0


def test_generating_function_is_tanh_power():
    # sum_n a(n, i) s^n = tanh(s)^i, with tanh = sinh / cosh
    order = 16
    sinh = PowerSeries([Fraction(k % 2, factorial(k)) for k in range(order + 1)])
    cosh = PowerSeries([Fraction((k + 1) % 2, factorial(k)) for k in range(order + 1)])
    tanh = sinh / cosh
    table = gamma_coeffs_recurrence(order)
    for i in range(order + 1):
        p = tanh**i
        for n in range(order + 1):
            assert table(n, i) == p[n], (n, i)


def test_table_rejects_even_denominator():
    with pytest.raises(IntegrityError):
        GammaCoeffTable([{0: 1}, {1: Fraction(1, 2)}])


def test_table_truncate_and_len():
    t = gamma_coeffs_recurrence(10)
    assert len(t) == 11
    assert t.truncate(4) == gamma_coeffs_recurrence(4)
    with pytest.raises(ValueError):
        t.truncate(11)


def test_corrupt_tangent_entry_is_caught():
    t = build_table(8)
    # a(7,3) = T(7,3)/840; an odd numerator breaks 2-integrality outright
    with pytest.raises(IntegrityError):
        gamma_coeffs_closed(8, t.with_entry(7, 3, 617))
    # a multiple of 8 keeps the denominator odd but no longer matches
    assert gamma_coeffs_closed(8, t.with_entry(7, 3, 624)) != gamma_coeffs_recurrence(8)


# -- the mod-2 formula --------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_printed_mod2_rows(n):
    assert gamma_coeffs_mod2(4)[n] == GAMMA_ROWS_MOD2[n]


def test_mod2_row_5():
    assert gamma_coeffs_mod2(5)[5] == {5, 3}
    row5 = gamma_coeffs_closed(5, build_table(5)).rows()[5]
    assert {i for i, c in row5.items() if reduce_two_local(c, 1)} == {5, 3}


def test_mod2_reduction_of_closed_form_to_64():
    closed = gamma_coeffs_closed(64, build_table(64))
    bits = gamma_coeffs_mod2(64)
    for n in range(65):
        assert closed.row(n).mod2() == bits[n], n


def test_mod2_placement_uses_binomial_parity():
    bits = gamma_coeffs_mod2(40)
    for n in range(41):
        assert bits[n] == {n - 2 * j for j in range(n // 2 + 1) if comb(n, j) % 2}


@pytest.mark.parametrize("r", range(0, 5))
def test_iterated_lambda2_gives_gamma_of_power_of_two(r):
    table = gamma_coeffs_closed(16, build_table(16))
    it = L(1)
    for _ in range(r):
        it = lambda2(it)
    assert it.mod2() == table.row(2**r).mod2() == {2**r}


def test_from_mod2_table():
    t = GammaCoeffTable.from_mod2(gamma_coeffs_mod2(5))
    assert t.row(3) == L(3) + L(1)
    assert t(5, 1) == 0


# -- the universal identities -------------------------------------------------


def test_lambda_of_sum_examples():
    assert lambda_of_sum(0) == LambdaVector2({(0, 0): 1})
    assert lambda_of_sum(1) == LambdaVector2({(1, 0): 1, (0, 1): 1})
    assert lambda_of_sum(2) == LambdaVector2({(2, 0): 1, (1, 1): 1, (0, 2): 1})


def test_lambda_vector2_reduces_each_variable():
    xy = LambdaVector2({(1, 1): 1})
    assert xy * xy == LambdaVector2.tensor(L(1) * L(1), L(1) * L(1))
    assert xy * xy == LambdaVector2({(2, 2): 4})


def test_axiom4_examples():
    t = gamma_coeffs_recurrence(4)
    assert t.row(2) * t.row(2) == t.row(4) * 6 == L(4) * 6 - L(2) * 4
    assert t.row(1) * t.row(1) == t.row(2) * 2 == mul_basis(1, 1)
    assert all(verify_axiom4(0, n) for n in range(6))


def test_axiom4_for_all_small_pairs():
    table = gamma_coeffs_recurrence(16)
    for m in range(17):
        for n in range(17 - m):
            assert verify_axiom4(m, n, table), (m, n)


def test_axiom4_fails_with_corrupt_coefficient():
    rows = gamma_coeffs_recurrence(6).rows()
    rows[3][1] = Fraction(1, 3)
    assert not verify_axiom4(1, 2, GammaCoeffTable(rows))


def test_axiom2_for_n_up_to_8():
    table = gamma_coeffs_recurrence(8)
    for n in range(9):
        assert verify_axiom2(n, table), n


def test_axiom2_at_two_is_the_sum_rule():
    lhs = LambdaVector2()
    for i, c in gamma_coeffs_recurrence(2).row(2).items():
        lhs = lhs + lambda_of_sum(i) * c
    assert lhs == LambdaVector2({(2, 0): 1, (1, 1): 1, (0, 2): 1})


def test_axiom5_universal_at_2_2():
    # gamma_2(gamma_2(x)) = 3 gamma_4(x)
    t = gamma_coeffs_recurrence(4)
    assert lambda2(t.row(2)) == t.row(4) * 3 == lambda2_basis(2)


def test_axiom5_universal_via_lambda2():
    # gamma_2(gamma_m(x)) = ((2m)! / (m!^2 2!)) gamma_2m(x); gamma_2 = lambda^2
    t = gamma_coeffs_recurrence(12)
    for m in range(1, 7):
        coeff = factorial(2 * m) // (factorial(m) ** 2 * 2)
        assert lambda2(t.row(m)) == t.row(2 * m) * coeff, m


# -- shared cache -------------------------------------------------------------


def test_gamma_table_cache_is_consistent_under_threads():
    results = []

    def work(N):
        results.append((N, gamma_table(N)))

    threads = [threading.Thread(target=work, args=(N,)) for N in (5, 30, 12, 30, 3, 25)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    ref = gamma_coeffs_recurrence(30)
    for N, table in results:
        assert table.N == N
        assert table == ref.truncate(N)


@given(st.integers(0, 20))
@settings(max_examples=20, deadline=None)
def test_parity_and_diagonal(N):
    t = gamma_table(N)
    for n in range(N + 1):
        assert t(n, n) == 1
        for i in range(n + 1):
            if (n - i) % 2:
                assert t(n, i) == 0
