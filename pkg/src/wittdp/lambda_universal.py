"""Exterior powers of a generic element x of the fundamental ideal.

Elements of the universal ring are finite combinations of the basis
lambda^i(x), multiplied with the product rule

    lambda^a(x) lambda^b(x)
        = sum_j C(a+b-2j, a-j) C(-a-b+2j, j) lambda^(a+b-2j)(x),

which holds for every x in ker(rank) inside a Grothendieck-Witt ring.
Every identity proven here therefore holds over any field. The module also
builds the divided-power coefficient tables gamma_n = sum_i a(n, i) lambda^i.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from numbers import Rational
from typing import Iterable, Iterator, Mapping

from .numkit import TwoLocal, binomial, binomial_mod2, reduce_two_local
from .tangent import TangentTable, build_table

__all__ = [
    "LambdaVector",
    "LambdaVector2",
    "GammaCoeffTable",
    "IntegrityError",
    "mul_basis",
    "lambda2_basis",
    "lambda2",
    "lambda_of_sum",
    "gamma_coeffs_recurrence",
    "gamma_coeffs_closed",
    "gamma_coeffs_mod2",
    "gamma_table",
    "verify_axiom2",
    "verify_axiom4",
]


class IntegrityError(RuntimeError):
    """A computed coefficient left the ring of 2-local integers."""


def _clean(items: Iterable[tuple]) -> dict:
    out: dict = {}
    for k, c in items:
        out[k] = out.get(k, 0) + c
    return {k: Fraction(c) for k, c in out.items() if c != 0}


class LambdaVector(Mapping[int, Fraction]):
    """Finite combination sum_i c_i lambda^i(x) with rational c_i.

    ``u * v`` is the universal product; ``c * u`` scales.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, Rational] | Iterable[tuple[int, Rational]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c = _clean(items)
        if any(i < 0 for i in c):
            raise ValueError("lambda indices must be >= 0")
        self._c = c
        self._hash = None

    @classmethod
    def basis(cls, i: int) -> LambdaVector:
        return cls({i: 1})

    def __getitem__(self, i: int) -> Fraction:
        return self._c[i]

    def get(self, i, default=Fraction(0)):
        return self._c.get(i, default)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._c))

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, LambdaVector):
            return self._c == other._c
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def degree(self) -> int:
        return max(self._c, default=-1)

    def __add__(self, other: LambdaVector) -> LambdaVector:
        if not isinstance(other, LambdaVector):
            return NotImplemented
        return LambdaVector(list(self._c.items()) + list(other._c.items()))

    def __neg__(self) -> LambdaVector:
        return LambdaVector({i: -c for i, c in self._c.items()})

    def __sub__(self, other: LambdaVector) -> LambdaVector:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Rational):
            return LambdaVector({i: c * other for i, c in self._c.items()})
        if not isinstance(other, LambdaVector):
            return NotImplemented
        terms = []
        for a, ca in self._c.items():
            for b, cb in other._c.items():
                for k, cab in mul_basis(a, b)._c.items():
                    terms.append((k, ca * cb * cab))
        return LambdaVector(terms)

    def __rmul__(self, other):
        if isinstance(other, Rational):
            return self * other
        return NotImplemented

    def mod2(self) -> frozenset[int]:
        """Indices whose coefficient is odd (coefficients must be 2-local)."""
        return frozenset(i for i, c in self._c.items() if reduce_two_local(c, 1))

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for i in sorted(self._c, reverse=True):
            c = self._c[i]
            parts.append(f"{c}*L{i}")
        return " + ".join(parts)


@lru_cache(maxsize=None)
def mul_basis(a: int, b: int) -> LambdaVector:
    """lambda^a(x) * lambda^b(x) expanded in the lambda basis."""
    if a < 0 or b < 0:
        raise ValueError("indices must be >= 0")
    terms = []
    for j in range(min(a, b) + 1):
        c = binomial(a + b - 2 * j, a - j) * binomial(-a - b + 2 * j, j)
        terms.append((a + b - 2 * j, c))
    return LambdaVector(terms)


@lru_cache(maxsize=None)
def lambda2_basis(a: int) -> LambdaVector:
    """lambda^2(lambda^a(x)); all coefficients turn out integral."""
    if a < 1:
        raise ValueError("lambda2_basis needs a >= 1; lambda^2 of a scalar is outside the ideal")
    terms = []
    for j in range(a + 1):
        twice = binomial(2 * a - 2 * j, a - j) * binomial(-2 * a + 2 * j, j)
        if twice % 2:
            raise IntegrityError(f"half-integral coefficient in lambda^2(lambda^{a})")
        terms.append((2 * a - 2 * j, twice // 2))
    return LambdaVector(terms)


def _binom2(c: Fraction) -> Fraction:
    return c * (c - 1) / 2


def lambda2(u: LambdaVector) -> LambdaVector:
    """lambda^2 of a combination supported in degrees >= 1.

    Uses lambda^2(sum c_i w_i) = sum C(c_i, 2) w_i^2 + sum c_i lambda^2(w_i)
    + sum_{i<j} c_i c_j w_i w_j, with C(c, 2) = c(c-1)/2 for rational c.
    """
    if 0 in u:
        raise ValueError("lambda2 is only defined here on the ideal (no lambda^0 term)")
    idx = sorted(u)
    result = LambdaVector()
    for pos, i in enumerate(idx):
        ci = u[i]
        w = LambdaVector.basis(i)
        result = result + (w * w) * _binom2(ci) + lambda2_basis(i) * ci
        for j in idx[pos + 1:]:
            result = result + mul_basis(i, j) * (ci * u[j])
    return result


class LambdaVector2(Mapping[tuple[int, int], Fraction]):
    """Finite combination sum c_ij lambda^i(x) lambda^j(y), two independent variables."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[tuple[int, int], Rational] | Iterable = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        self._c = _clean(items)

    @classmethod
    def tensor(cls, u: LambdaVector, v: LambdaVector) -> LambdaVector2:
        return cls([((i, j), u[i] * v[j]) for i in u for j in v])

    def __getitem__(self, k):
        return self._c[k]

    def __iter__(self):
        return iter(sorted(self._c))

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, LambdaVector2):
            return self._c == other._c
        return NotImplemented

    __hash__ = None

    def __add__(self, other: LambdaVector2) -> LambdaVector2:
        return LambdaVector2(list(self._c.items()) + list(other._c.items()))

    def __mul__(self, other):
        if isinstance(other, Rational):
            return LambdaVector2({k: c * other for k, c in self._c.items()})
        if not isinstance(other, LambdaVector2):
            return NotImplemented
        # variables never mix: reduce the x-part and the y-part separately
        terms = []
        for (a, b), c1 in self._c.items():
            for (p, q), c2 in other._c.items():
                xs, ys = mul_basis(a, p), mul_basis(b, q)
                for i, cx in xs.items():
                    for j, cy in ys.items():
                        terms.append(((i, j), c1 * c2 * cx * cy))
        return LambdaVector2(terms)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        return " + ".join(f"{c}*L{i}(x)L{j}(y)" for (i, j), c in sorted(self._c.items()))


def lambda_of_sum(i: int) -> LambdaVector2:
    """lambda^i(x + y) = sum_j lambda^j(x) lambda^(i-j)(y)."""
    if i < 0:
        raise ValueError("i must be >= 0")
    return LambdaVector2({(j, i - j): 1 for j in range(i + 1)})


class GammaCoeffTable:
    """Coefficients a(n, i) with gamma_n(x) = sum_i a(n, i) lambda^i(x)."""

    def __init__(self, rows: list[dict[int, Rational]]):
        if not rows:
            raise ValueError("table needs at least row 0")
        checked = []
        for n, row in enumerate(rows):
            out = {}
            for i, c in row.items():
                if c == 0:
                    continue
                try:
                    out[i] = TwoLocal(c)
                except ValueError:
                    raise IntegrityError(f"a({n},{i}) = {c} has an even denominator") from None
            checked.append(out)
        self._rows = checked
        self.N = len(rows) - 1

    @classmethod
    def from_mod2(cls, bits: list[frozenset[int]]) -> GammaCoeffTable:
        """Integer table with coefficient 1 at each listed index (mod-2 formula)."""
        return cls([{i: 1 for i in row} for row in bits])

    def __call__(self, n: int, i: int) -> TwoLocal:
        return self._rows[n].get(i, TwoLocal(0))

    def row(self, n: int) -> LambdaVector:
        return LambdaVector(self._rows[n])

    def rows(self) -> list[dict[int, TwoLocal]]:
        return [dict(r) for r in self._rows]

    def truncate(self, N: int) -> GammaCoeffTable:
        if N > self.N:
            raise ValueError(f"table only covers order {self.N}")
        return GammaCoeffTable(self._rows[: N + 1])

    def __eq__(self, other) -> bool:
        if isinstance(other, GammaCoeffTable):
            return self._rows == other._rows
        return NotImplemented

    __hash__ = None

    def __len__(self) -> int:
        return self.N + 1

    def __repr__(self) -> str:
        return f"GammaCoeffTable(N={self.N})"


def gamma_coeffs_recurrence(N: int) -> GammaCoeffTable:
    """Rows from a(n+1, i) = i/(n+1) (a(n, i-1) - a(n, i+1)), a(0, i) = [i = 0]."""
    if N < 0:
        raise ValueError("N must be >= 0")
    rows: list[dict[int, Fraction]] = [{0: Fraction(1)}]
    for n in range(N):
        prev = rows[-1]
        nxt = {}
        for i in range(1, n + 2):
            v = Fraction(i, n + 1) * (prev.get(i - 1, 0) - prev.get(i + 1, 0))
            if v:
                if v.denominator % 2 == 0:
                    raise IntegrityError(f"a({n + 1},{i}) = {v} has an even denominator")
                nxt[i] = v
        rows.append(nxt)
    return GammaCoeffTable(rows)


def gamma_coeffs_closed(N: int, t: TangentTable) -> GammaCoeffTable:
    """Rows from a(n, i) = (-1)^((n-i)/2) (i!/n!) T(n, i)."""
    if t.N < N:
        raise ValueError(f"tangent table covers order {t.N} < {N}")
    rows = []
    for n in range(N + 1):
        row = {}
        for i in range(n % 2, n + 1, 2):
            T = t(n, i)
            if T:
                sign = -1 if ((n - i) // 2) % 2 else 1
                row[i] = Fraction(sign * factorial(i) * T, factorial(n))
        rows.append(row)
    return GammaCoeffTable(rows)


def gamma_coeffs_mod2(N: int) -> list[frozenset[int]]:
    """Row n lists the indices n - 2j with C(n, j) odd."""
    if N < 0:
        raise ValueError("N must be >= 0")
    return [
        frozenset(n - 2 * j for j in range(n // 2 + 1) if binomial_mod2(n, j))
        for n in range(N + 1)
    ]


class _TableCache:
    """Lazily grown coefficient table; readers never see a partial table."""

    def __init__(self):
        self._lock = threading.Lock()
        self._table: GammaCoeffTable | None = None

    def get(self, N: int) -> GammaCoeffTable:
        table = self._table
        if table is None or table.N < N:
            with self._lock:
                table = self._table
                if table is None or table.N < N:
                    table = gamma_coeffs_closed(N, build_table(N))
                    self._table = table
        return table if table.N == N else table.truncate(N)


_cache = _TableCache()


def gamma_table(N: int) -> GammaCoeffTable:
    """Shared cached coefficient table (closed form) covering orders 0..N."""
    return _cache.get(N)


def verify_axiom4(m: int, n: int, table: GammaCoeffTable | None = None) -> bool:
    """gamma_m(x) gamma_n(x) == C(m+n, m) gamma_{m+n}(x) in the universal ring."""
    if table is None or table.N < m + n:
        table = gamma_coeffs_recurrence(m + n)
    return table.row(m) * table.row(n) == table.row(m + n) * comb(m + n, m)


def verify_axiom2(n: int, table: GammaCoeffTable | None = None) -> bool:
    """gamma_n(x + y) == sum_i gamma_i(x) gamma_{n-i}(y) in the two-variable ring."""
    if table is None or table.N < n:
        table = gamma_coeffs_recurrence(n)
    lhs = LambdaVector2()
    for i, c in table.row(n).items():
        lhs = lhs + lambda_of_sum(i) * c
    rhs = LambdaVector2()
    for i in range(n + 1):
        rhs = rhs + LambdaVector2.tensor(table.row(i), table.row(n - i))
    return lhs == rhs
