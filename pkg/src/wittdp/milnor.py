"""Milnor K-theory mod 2 of tower fields.

K_r(k((t)))/2 splits as K_r(k)/2 + {t} K_(r-1)(k)/2, so peeling every
Laurent variable gives a basis of K_r/2 made of the symbols

    {t_j : j in S} followed by r - |S| copies of the base generator,

where the base generator is {u} over F_p (K_1(F_p)/2 = Z/2, higher groups
vanish) and {-1} over R (K_d(R)/2 = Z/2 on {-1,...,-1} for all d). A symbol
is reduced to this basis by multilinear expansion of its square-class
entries, symmetry (signs vanish mod 2) and the Steinberg consequence
{a, a} = {a, -1}.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Sequence

from .fields import FieldTower, SquareClass, neg_one_class, parse_class
from .gw import (
    GWElement,
    MAX_MEMBERSHIP_VARIABLES,
    WittClass,
    ideal_power_membership,
    witt_canonicalize,
)
from .pfister import PfisterForm, expand, pfister_gamma

__all__ = [
    "Symbol",
    "SymbolSum",
    "canonicalize",
    "milnor_gamma",
    "pfister_map",
    "sum_pfister_map",
    "compatibility_check",
    "parse_symbols",
]

Symbol = tuple  # tuple[SquareClass, ...]


@dataclass(frozen=True)
class SymbolSum:
    """F_2-combination of degree-r symbols; a symbol listed an even number of times cancels."""

    tower: FieldTower
    degree: int
    symbols: frozenset

    @classmethod
    def of(cls, tower: FieldTower, degree: int, symbols: Iterable[Sequence[SquareClass]]) -> SymbolSum:
        counts = Counter()
        for s in symbols:
            s = tuple(s)
            if len(s) != degree:
                raise ValueError(f"symbol of length {len(s)} in a degree-{degree} sum")
            for e in s:
                if e.tower != tower:
                    raise ValueError(f"symbol entry over {e.tower}, expected {tower}")
            counts[s] += 1
        return cls(tower, degree, frozenset(s for s, c in counts.items() if c % 2))

    @classmethod
    def zero(cls, tower: FieldTower, degree: int) -> SymbolSum:
        return cls(tower, degree, frozenset())

    def __add__(self, other: SymbolSum) -> SymbolSum:
        if (self.tower, self.degree) != (other.tower, other.degree):
            raise ValueError("symbol sums over different towers or degrees")
        return SymbolSum(self.tower, self.degree, self.symbols ^ other.symbols)

    def __mul__(self, other: SymbolSum) -> SymbolSum:
        """Product by concatenation (not canonicalized)."""
        if self.tower != other.tower:
            raise ValueError("symbol sums over different towers")
        return SymbolSum.of(self.tower, self.degree + other.degree,
                            (s + t for s in self.symbols for t in other.symbols))

    def ordered(self) -> list[Symbol]:
        return sorted(self.symbols, key=lambda s: tuple(e.bits for e in s))

    def is_zero(self) -> bool:
        return not self.symbols

    def __str__(self) -> str:
        if not self.symbols:
            return "0"
        return " + ".join("{" + ",".join(str(e) for e in s) + "}" for s in self.ordered())


def _basis_symbol(tower: FieldTower, S: tuple[int, ...], d: int) -> Symbol:
    base = tower.base_nonsquare()
    return tuple(tower.t(j) for j in S) + (base,) * d


def _basis_keys(tower: FieldTower, symbol: Symbol) -> Counter:
    """Residue-basis expansion of one symbol, as counts of subsets S."""
    m = tower.m
    beta = neg_one_class(tower).bits & 1
    r = len(symbol)
    gens_per_entry = []
    for e in symbol:
        gens = ([0] if e.bits & 1 else []) + [j for j in range(1, m + 1) if e.bits >> j & 1]
        gens_per_entry.append(gens)
    out = Counter()
    for choice in product(*gens_per_entry):
        tcount = Counter(g for g in choice if g)
        extra = sum(k - 1 for k in tcount.values())
        d = r - len(tcount)
        # each repeated t contributes a {-1}, i.e. beta copies of the base generator
        if extra and not beta:
            continue
        if not tower.is_real and d >= 2:
            continue
        out[tuple(sorted(tcount))] += 1
    return out


def canonicalize(sigma: SymbolSum) -> SymbolSum:
    """Rewrite a symbol sum in the residue basis; equal classes give equal results."""
    total = Counter()
    for s in sigma.symbols:
        total.update(_basis_keys(sigma.tower, s))
    r = sigma.degree
    basis = sorted(S for S, c in total.items() if c % 2)
    return SymbolSum(sigma.tower, r, frozenset(_basis_symbol(sigma.tower, S, r - len(S)) for S in basis))


def _require_dp(tower: FieldTower, r: int) -> None:
    if not neg_one_class(tower).is_trivial():
        raise ValueError(f"divided powers on K^M/2 need -1 to be a square in {tower}")
    if r < 2:
        raise ValueError("divided powers on K^M_r/2 need r >= 2")


def milnor_gamma(n: int, sigma: SymbolSum) -> SymbolSum:
    """gamma_n(s_1 + ... + s_k) = sum over n-subsets of the concatenated symbols."""
    _require_dp(sigma.tower, sigma.degree)
    if n < 0:
        raise ValueError("n must be >= 0")
    syms = sigma.ordered()
    raw = SymbolSum.of(sigma.tower, n * sigma.degree,
                       (sum(c, ()) for c in combinations(syms, n)))
    return canonicalize(raw)


def pfister_map(symbol: Symbol, tower: FieldTower | None = None) -> WittClass:
    """{a_1, ..., a_r} -> Witt class of <<a_1, ..., a_r>> (degree 0 goes to <1>)."""
    if tower is None:
        if not symbol:
            raise ValueError("need a tower for the empty symbol")
        tower = symbol[0].tower
    if not symbol:
        return witt_canonicalize(GWElement.one(tower))
    return witt_canonicalize(expand(PfisterForm(tower, tuple(symbol))))


def sum_pfister_map(sigma: SymbolSum) -> WittClass:
    total = witt_canonicalize(GWElement.zero(sigma.tower))
    for s in sigma.ordered():
        total = total + pfister_map(s, sigma.tower)
    return total


def _witt_difference(a: WittClass, b: WittClass) -> WittClass:
    return witt_canonicalize(a.representative().to_gw() - b.representative().to_gw())


def compatibility_check(n: int, sigma: SymbolSum) -> bool:
    """gamma_n on W and on K^M/2 agree modulo I^(nr+1).

    Left: gamma_n of the sum of Pfister forms of the symbols, computed by the
    general exterior-power formula. Right: Pfister image of milnor_gamma.
    """
    tower = sigma.tower
    _require_dp(tower, sigma.degree)
    if not tower.is_finite or tower.m > MAX_MEMBERSHIP_VARIABLES:
        raise ValueError("compatibility is checked only over finite towers with m <= 2")
    if n < 1:
        raise ValueError("n must be >= 1")
    pfs = [PfisterForm(tower, s) for s in sigma.ordered()]
    lhs = pfister_gamma(n, pfs, tower)
    rhs = sum_pfister_map(milnor_gamma(n, sigma))
    return ideal_power_membership(_witt_difference(lhs, rhs), n * sigma.degree + 1)


_SYMBOL_RE = re.compile(r"\{([^{}]*)\}")


def parse_symbols(tower: FieldTower, text: str) -> SymbolSum:
    """Parse ``{t1,t2}+{u,t1}``; ``0`` or an empty string is not accepted (degree unknown)."""
    s = text.replace(" ", "")
    parts = s.split("+")
    symbols = []
    for part in parts:
        m = _SYMBOL_RE.fullmatch(part)
        if not m:
            raise ValueError(f"bad symbol {part!r}")
        body = m.group(1)
        entries = tuple(parse_class(tower, tok) for tok in body.split(",")) if body else ()
        symbols.append(entries)
    degrees = {len(e) for e in symbols}
    if len(degrees) != 1:
        raise ValueError("all symbols in a sum must have the same degree")
    return SymbolSum.of(tower, degrees.pop(), symbols)
