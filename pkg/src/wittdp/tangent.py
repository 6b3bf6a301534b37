"""Tangent numbers T(n, i), defined by (tan t)^i / i! = sum_n T(n, i) t^n / n!.

Two constructions are provided and are expected to agree:

* :func:`build_table` runs the integer recurrence
  ``T(n+1, i) = T(n, i-1) + i(i+1) T(n, i+1)`` from ``T(0, 0) = 1``.
* :func:`series_oracle` expands tan t = sin t / cos t as a truncated
  rational power series and reads the coefficients of its powers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .numkit import PowerSeries, bernoulli

__all__ = [
    "TangentTable",
    "build_table",
    "series_oracle",
    "bernoulli_rhs",
    "bernoulli_identity_check",
    "discover_bernoulli_convention",
]


@dataclass(frozen=True)
class TangentTable:
    """Lower-triangular table; ``rows[n][i]`` is T(n, i) for 0 <= i <= n."""

    N: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.rows) != self.N + 1:
            raise ValueError("table must have N + 1 rows")
        for n, row in enumerate(self.rows):
            if len(row) != n + 1:
                raise ValueError(f"row {n} has length {len(row)}, expected {n + 1}")

    def __call__(self, n: int, i: int) -> int:
        if not 0 <= n <= self.N:
            raise IndexError(f"row {n} outside table of order {self.N}")
        if i < 0 or i > n:
            return 0
        return self.rows[n][i]

    def column(self, i: int) -> list[int]:
        return [self(n, i) for n in range(self.N + 1)]

    def with_entry(self, n: int, i: int, value: int) -> TangentTable:
        """Copy with one entry replaced (used to build negative controls)."""
        rows = [list(r) for r in self.rows]
        rows[n][i] = value
        return TangentTable(self.N, tuple(tuple(r) for r in rows))


def build_table(N: int) -> TangentTable:
    if N < 0:
        raise ValueError("N must be >= 0")
    rows = [[1]]
    for n in range(N):
        prev = rows[-1]

        def b(i: int) -> int:
            return prev[i] if 0 <= i <= n else 0

        rows.append([b(i - 1) + i * (i + 1) * b(i + 1) for i in range(n + 2)])
    return TangentTable(N, tuple(tuple(r) for r in rows))


def series_oracle(N: int) -> TangentTable:
    """Tangent table from the series of tan t = sin t / cos t."""
    if N < 0:
        raise ValueError("N must be >= 0")
    tan = PowerSeries.sin(N) / PowerSeries.cos(N)
    cols = []
    power = PowerSeries.constant(1, N)
    for i in range(N + 1):
        scaled = power * Fraction(1, factorial(i))
        cols.append([scaled[n] * factorial(n) for n in range(N + 1)])
        power = power * tan
    rows = []
    for n in range(N + 1):
        row = []
        for i in range(n + 1):
            v = cols[i][n]
            if v.denominator != 1:
                raise ArithmeticError(f"T({n},{i}) = {v} is not an integer")
            row.append(int(v))
        rows.append(tuple(row))
    return TangentTable(N, tuple(rows))


def bernoulli_rhs(n: int) -> Fraction:
    """(-1)^(n-1) B_{2n} 4^n (4^n - 1) / (2n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    q = 4**n
    return (-1) ** (n - 1) * bernoulli(2 * n) * q * (q - 1) / (2 * n)


# row index of T(., 1) that the Bernoulli expression is compared against
CONVENTIONS = {
    "T(2n+1,1)": lambda n: 2 * n + 1,
    "T(2n-1,1)": lambda n: 2 * n - 1,
}


def bernoulli_identity_check(n: int, table: TangentTable | None = None,
                             convention: str = "T(2n-1,1)") -> bool:
    """Compare the Bernoulli expression at ``n`` with column 1 of the table.

    The default convention is the one that actually matches the tangent
    numbers; see :func:`discover_bernoulli_convention`.
    """
    row = CONVENTIONS[convention](n)
    if table is None or table.N < row:
        table = build_table(row)
    return bernoulli_rhs(n) == table(row, 1)


def discover_bernoulli_convention(n_max: int = 8,
                                  table: TangentTable | None = None) -> dict:
    """Test both candidate row indices for n = 1..n_max.

    Returns a dict with per-convention match lists and the list of
    conventions that matched for every n.
    """
    need = 2 * n_max + 1
    if table is None or table.N < need:
        table = build_table(need)
    results = {}
    for name in CONVENTIONS:
        results[name] = [
            bernoulli_identity_check(n, table, name) for n in range(1, n_max + 1)
        ]
    matching = [name for name, ok in results.items() if all(ok)]
    return {
        "n_max": n_max,
        "rhs": [str(bernoulli_rhs(n)) for n in range(1, n_max + 1)],
        "column1": table.column(1)[: need + 1],
        "matches": results,
        "matching": matching,
        "printed_index_matches": "T(2n+1,1)" in matching,
    }
