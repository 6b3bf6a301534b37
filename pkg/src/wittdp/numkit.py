"""Exact integer and rational helpers: binomials, 2-local rationals,
Bernoulli numbers and truncated power series over Q."""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from numbers import Rational
from typing import Iterable

__all__ = [
    "binomial",
    "binomial_mod2",
    "half_central_mod2",
    "TwoLocal",
    "is_two_local",
    "reduce_two_local",
    "bernoulli",
    "PowerSeries",
]


def binomial(n: int, k: int) -> int:
    """Generalized binomial n(n-1)...(n-k+1)/k! for any integer n."""
    if k < 0:
        raise ValueError(f"binomial: k must be >= 0, got {k}")
    num = 1
    for j in range(k):
        num *= n - j
    return num // factorial(k)


def binomial_mod2(n: int, k: int) -> int:
    """C(n, k) mod 2 by the binary digit rule (Lucas at p = 2)."""
    if n < 0 or k < 0:
        raise ValueError("binomial_mod2 needs n, k >= 0")
    return 1 if k & ~n == 0 else 0


def half_central_mod2(n: int) -> int:
    """(1/2) C(2n, n) mod 2, which is 1 exactly when n is a power of two."""
    if n < 1:
        raise ValueError("half_central_mod2 needs n >= 1")
    return (binomial(2 * n, n) // 2) % 2


def is_two_local(q: Rational) -> bool:
    return Fraction(q).denominator % 2 == 1


class TwoLocal(Fraction):
    """A rational number with odd denominator.

    Ring operations with ints or other ``TwoLocal`` values stay in the
    class; mixing with a plain ``Fraction`` falls back to ``Fraction``.
    """

    __slots__ = ()

    def __new__(cls, numerator=0, denominator=None):
        self = super().__new__(cls, numerator, denominator)
        if self.denominator % 2 == 0:
            raise ValueError(f"{Fraction(self)} is not 2-local (even denominator)")
        return self

    def _lift(self, other, result):
        if isinstance(other, (TwoLocal, int)):
            return TwoLocal(result)
        return result

    def __add__(self, other):
        return self._lift(other, Fraction.__add__(self, other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._lift(other, Fraction.__sub__(self, other))

    def __rsub__(self, other):
        return self._lift(other, Fraction.__rsub__(self, other))

    def __mul__(self, other):
        return self._lift(other, Fraction.__mul__(self, other))

    __rmul__ = __mul__

    def __neg__(self):
        return TwoLocal(-Fraction(self))

    def __pow__(self, exponent):
        if isinstance(exponent, int) and exponent >= 0:
            return TwoLocal(Fraction.__pow__(self, exponent))
        return Fraction.__pow__(self, exponent)

    def __repr__(self) -> str:
        return f"TwoLocal({self.numerator}, {self.denominator})"

    def __reduce__(self):
        return (TwoLocal, (self.numerator, self.denominator))


def reduce_two_local(q: Rational, k: int) -> int:
    """Image of a 2-local rational a/b in Z/2^k, i.e. a * b^-1 mod 2^k."""
    if k < 1:
        raise ValueError("k must be positive")
    q = Fraction(q)
    if q.denominator % 2 == 0:
        raise ValueError(f"{q} has even denominator; no image in Z/2^{k}")
    modulus = 1 << k
    return q.numerator * pow(q.denominator, -1, modulus) % modulus


_BERNOULLI: list[Fraction] = [Fraction(1)]


def bernoulli(m: int) -> Fraction:
    """Bernoulli number B_m for even m >= 0.

    Uses sum_{j=0}^{m} C(m+1, j) B_j = 0. Odd indices are refused so that
    off-by-one index slips show up as errors rather than silent zeros.
    """
    if m < 0 or m % 2:
        raise ValueError(f"bernoulli: index must be even and >= 0, got {m}")
    # _BERNOULLI[j] holds B_j for all j (including B_1 = -1/2) computed so far
    while len(_BERNOULLI) <= m:
        s = len(_BERNOULLI)
        acc = sum(binomial(s + 1, j) * _BERNOULLI[j] for j in range(s))
        _BERNOULLI.append(Fraction(-acc, s + 1))
    return _BERNOULLI[m]


class PowerSeries:
    """Truncated power series sum_{k<=order} c_k t^k with rational coefficients.

    Binary operations between series of different orders truncate to the
    smaller order.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable[Rational], order: int | None = None):
        cs = [Fraction(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("order must be >= 0")
        cs = cs[: order + 1] + [Fraction(0)] * (order + 1 - len(cs))
        self.order = order
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c: Rational, order: int) -> PowerSeries:
        return cls([c], order)

    @classmethod
    def variable(cls, order: int) -> PowerSeries:
        return cls([0, 1], order)

    @classmethod
    def sin(cls, order: int) -> PowerSeries:
        return cls(
            [
                Fraction((-1) ** (k // 2), factorial(k)) if k % 2 else 0
                for k in range(order + 1)
            ],
            order,
        )

    @classmethod
    def cos(cls, order: int) -> PowerSeries:
        return cls(
            [
                0 if k % 2 else Fraction((-1) ** (k // 2), factorial(k))
                for k in range(order + 1)
            ],
            order,
        )

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k <= self.order:
            return self.coeffs[k]
        raise IndexError(k)

    def __len__(self) -> int:
        return self.order + 1

    def _coerce(self, other) -> PowerSeries:
        if isinstance(other, PowerSeries):
            return other
        if isinstance(other, Rational):
            return PowerSeries.constant(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = min(self.order, other.order)
        return PowerSeries([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self) -> PowerSeries:
        return PowerSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            return PowerSeries([c * other for c in self.coeffs], self.order)
        if not isinstance(other, PowerSeries):
            return NotImplemented
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            if a[i]:
                for j in range(n + 1 - i):
                    out[i + j] += a[i] * b[j]
        return PowerSeries(out, n)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> PowerSeries:
        if e < 0:
            return self.inverse() ** (-e)
        result = PowerSeries.constant(1, self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> PowerSeries:
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        out = [1 / a[0]]
        for k in range(1, self.order + 1):
            s = sum(a[j] * out[k - j] for j in range(1, k + 1))
            out.append(-s / a[0])
        return PowerSeries(out, self.order)

    def __truediv__(self, other):
        if isinstance(other, Rational):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def __eq__(self, other) -> bool:
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        return f"PowerSeries({[str(c) for c in self.coeffs]}, order={self.order})"

