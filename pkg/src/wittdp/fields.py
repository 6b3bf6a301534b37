"""Coefficient fields F_p((t1))...((tm)) and R((t1))...((tm)) and their square classes.

Only square classes are ever represented. A class is stored as a bitmask:
bit 0 is the base part (the fixed non-square u of F_p, or the sign -1 over R),
bit j (1 <= j <= m) is the parity of the t_j exponent. The square-class group
is then (Z/2)^(m+1) with XOR as multiplication.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Sequence

__all__ = [
    "FieldTower",
    "SquareClass",
    "TowerMismatch",
    "is_odd_prime",
    "smallest_nonresidue",
    "sqclass_mul",
    "sqclass_of_scalar",
    "neg_one_class",
    "witt_exponent",
    "parse_field",
    "parse_class",
]


class TowerMismatch(ValueError):
    pass


def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def smallest_nonresidue(p: int) -> int:
    for v in range(2, p):
        if pow(v, (p - 1) // 2, p) == p - 1:
            return v
    raise ValueError(f"no non-residue mod {p}")


@dataclass(frozen=True)
class FieldTower:
    """``p`` is an odd prime, or ``None`` for the real base; ``m`` Laurent variables."""

    p: int | None
    m: int = 0

    def __post_init__(self):
        if self.p is not None and not is_odd_prime(self.p):
            raise ValueError(f"base must be an odd prime field, got p={self.p}")
        if self.m < 0:
            raise ValueError("number of Laurent variables must be >= 0")

    @classmethod
    def prime(cls, p: int, m: int = 0) -> FieldTower:
        return cls(p, m)

    @classmethod
    def real(cls, m: int = 0) -> FieldTower:
        return cls(None, m)

    @property
    def is_real(self) -> bool:
        return self.p is None

    @property
    def is_finite(self) -> bool:
        """True when the Witt group is finite (prime field base)."""
        return self.p is not None

    @property
    def nclasses(self) -> int:
        return 1 << (self.m + 1)

    def classes(self) -> Iterator[SquareClass]:
        for bits in range(self.nclasses):
            yield SquareClass(self, bits)

    def one(self) -> SquareClass:
        return SquareClass(self, 0)

    def base_nonsquare(self) -> SquareClass:
        return SquareClass(self, 1)

    def t(self, j: int) -> SquareClass:
        if not 1 <= j <= self.m:
            raise ValueError(f"t{j} is not a variable of {self}")
        return SquareClass(self, 1 << j)

    def lower(self) -> FieldTower:
        """The residue field of the outermost Laurent variable."""
        if self.m == 0:
            raise ValueError("no Laurent variable to peel")
        return FieldTower(self.p, self.m - 1)

    def __str__(self) -> str:
        base = "R" if self.p is None else f"F{self.p}"
        return base + "".join(f"((t{j}))" for j in range(1, self.m + 1))


@dataclass(frozen=True)
class SquareClass:
    tower: FieldTower
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits < self.tower.nclasses:
            raise ValueError(f"bitmask {self.bits} out of range for {self.tower}")

    @property
    def base_part(self) -> int:
        return self.bits & 1

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple((self.bits >> j) & 1 for j in range(1, self.tower.m + 1))

    def __mul__(self, other: SquareClass) -> SquareClass:
        return sqclass_mul(self, other)

    def is_trivial(self) -> bool:
        return self.bits == 0

    def __str__(self) -> str:
        return class_literal(self.tower, self.bits)


def class_literal(tower: FieldTower, bits: int) -> str:
    parts = []
    if bits & 1:
        parts.append("-1" if tower.is_real else "u")
    parts += [f"t{j}" for j in range(1, tower.m + 1) if bits >> j & 1]
    return "*".join(parts) if parts else "1"


def sqclass_mul(a: SquareClass, b: SquareClass) -> SquareClass:
    if a.tower != b.tower:
        raise TowerMismatch(f"{a.tower} vs {b.tower}")
    return SquareClass(a.tower, a.bits ^ b.bits)


def sqclass_of_scalar(tower: FieldTower, v: int, exponents: Sequence[int] = ()) -> SquareClass:
    """Class of v * t1^e1 ... tm^em, where v is a base-field scalar.

    Over F_p the base bit is set when v is a non-residue (Euler's criterion);
    over R it is set when v < 0.
    """
    exps = list(exponents) + [0] * (tower.m - len(exponents))
    if len(exps) > tower.m:
        raise ValueError(f"{len(exps)} exponents for a tower with {tower.m} variables")
    if tower.is_real:
        if v == 0:
            raise ValueError("zero has no square class")
        base = 1 if v < 0 else 0
    else:
        p = tower.p
        if v % p == 0:
            raise ValueError(f"{v} is zero in F{p}")
        base = 0 if pow(v % p, (p - 1) // 2, p) == 1 else 1
    bits = base
    for j, e in enumerate(exps, start=1):
        if e % 2:
            bits |= 1 << j
    return SquareClass(tower, bits)


def neg_one_class(tower: FieldTower) -> SquareClass:
    return sqclass_of_scalar(tower, -1)


def witt_exponent(tower: FieldTower) -> int | None:
    """Smallest power of 2 killing W(k); ``None`` stands for infinite (real base)."""
    if tower.is_real:
        return None
    return 2 if tower.p % 4 == 1 else 4


_FIELD_RE = re.compile(r"^(?:F(\d+)|R)((?:\(\(t\d+\)\))*)$")


def parse_field(text: str) -> FieldTower:
    """Parse ``F13((t1))((t2))``, ``R`` or ``R((t1))``."""
    s = text.replace(" ", "")
    m = _FIELD_RE.match(s)
    if not m:
        raise ValueError(f"bad field literal {text!r}")
    names = re.findall(r"t(\d+)", m.group(2))
    if [int(k) for k in names] != list(range(1, len(names) + 1)):
        raise ValueError(f"Laurent variables must be t1, t2, ... in order: {text!r}")
    p = int(m.group(1)) if m.group(1) else None
    return FieldTower(p, len(names))


def parse_class(tower: FieldTower, text: str) -> SquareClass:
    """Parse a product like ``u*t1``, ``-1*t2`` or ``3`` into a square class."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty square-class literal")
    bits = 0
    for tok in s.split("*"):
        if tok == "u":
            if tower.is_real:
                raise ValueError("use -1 for the non-square class over R")
            bits ^= 1
        elif re.fullmatch(r"t\d+", tok):
            bits ^= tower.t(int(tok[1:])).bits
        elif re.fullmatch(r"[+-]?\d+", tok):
            bits ^= sqclass_of_scalar(tower, int(tok)).bits
        else:
            raise ValueError(f"bad square-class token {tok!r}")
    return SquareClass(tower, bits)
