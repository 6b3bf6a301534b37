"""Pfister forms <<a_1, ..., a_r>> = <1, -a_1> x ... x <1, -a_r> and their divided powers."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .fields import FieldTower, SquareClass, TowerMismatch, neg_one_class
from .gw import (
    DiagonalForm,
    GWElement,
    WittClass,
    gamma,
    lift_witt_to_I,
    witt_canonicalize,
    witt_eval_2local,
)
from .lambda_universal import gamma_table

__all__ = [
    "PfisterForm",
    "expand",
    "pfister_gamma",
    "verify_gamma2_pfister",
    "gamma_pfister_closed",
    "gamma_sum_pfister",
]

# <<a>> = <1, SLOT_SIGN * a>; other references use +1 here
SLOT_SIGN = -1


@dataclass(frozen=True)
class PfisterForm:
    tower: FieldTower
    slots: tuple[SquareClass, ...]

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))
        if not self.slots:
            raise ValueError("a Pfister form needs at least one slot")
        for s in self.slots:
            if s.tower != self.tower:
                raise TowerMismatch(f"slot over {s.tower} in a form over {self.tower}")

    @property
    def fold(self) -> int:
        return len(self.slots)

    def __str__(self) -> str:
        return "<<" + ", ".join(str(s) for s in self.slots) + ">>"


def expand(pf: PfisterForm) -> DiagonalForm:
    """The 2^r diagonal entries prod_i (-a_i)^e_i over e in {0,1}^r."""
    sign = neg_one_class(pf.tower) if SLOT_SIGN == -1 else pf.tower.one()
    entries = [pf.tower.one()]
    for a in pf.slots:
        na = sign * a
        entries = entries + [e * na for e in entries]
    return DiagonalForm(pf.tower, tuple(entries))


def _lift(pf: PfisterForm) -> GWElement:
    return lift_witt_to_I(expand(pf))


def pfister_gamma(n: int, pfs: Sequence[PfisterForm], tower: FieldTower | None = None) -> WittClass:
    """General-path gamma_n of a sum of Pfister forms, via the lifted sum."""
    if tower is None:
        if not pfs:
            raise ValueError("need a tower for an empty sum")
        tower = pfs[0].tower
    x = GWElement.zero(tower)
    for pf in pfs:
        x = x + _lift(pf)
    return witt_eval_2local(gamma(n, x, gamma_table(n)))


def verify_gamma2_pfister(pf: PfisterForm) -> bool:
    """gamma_2 <<a_1..a_r>> == 2^(r-1) <<a_1..a_r>> in W(k)."""
    lhs = pfister_gamma(2, [pf])
    rhs = witt_canonicalize(expand(pf).to_gw() * (2 ** (pf.fold - 1)))
    return lhs == rhs


def _require_minus_one_square(tower: FieldTower) -> None:
    if not neg_one_class(tower).is_trivial():
        raise ValueError(f"-1 is not a square in {tower}")


def gamma_pfister_closed(n: int, pf: PfisterForm) -> WittClass:
    """Closed values when -1 is a square.

    For a 1-fold form gamma_n is the form itself when n is a power of 2 and 0
    otherwise; for r >= 2 it is the form at n = 1 and 0 for n >= 2.
    """
    _require_minus_one_square(pf.tower)
    if n < 1:
        raise ValueError("n must be >= 1")
    zero = witt_canonicalize(GWElement.zero(pf.tower))
    if pf.fold == 1:
        keep = n & (n - 1) == 0
    else:
        keep = n == 1
    return witt_canonicalize(expand(pf)) if keep else zero


def gamma_sum_pfister(n: int, pfs: Sequence[PfisterForm], tower: FieldTower | None = None) -> WittClass:
    """gamma_n(s_1 + ... + s_k) = sum over i_1 < ... < i_n of s_i1 ... s_in (r >= 2)."""
    if tower is None:
        if not pfs:
            raise ValueError("need a tower for an empty sum")
        tower = pfs[0].tower
    _require_minus_one_square(tower)
    if any(pf.fold < 2 for pf in pfs):
        raise ValueError("the elementary-symmetric formula needs r-fold forms with r >= 2")
    if len({pf.fold for pf in pfs}) > 1:
        raise ValueError("all summands must have the same fold")
    if n < 0:
        raise ValueError("n must be >= 0")
    total = GWElement.zero(tower)
    forms = [expand(pf).to_gw() for pf in pfs]
    for combo in combinations(forms, n):
        prod = GWElement.one(tower)
        for f in combo:
            prod = prod * f
        total = total + prod
    return witt_canonicalize(total)
