"""Grothendieck-Witt and Witt rings of tower fields.

A :class:`GWElement` is a finite rational combination of one-dimensional
forms <a>, indexed by square classes. Integer combinations are virtual
forms; combinations with odd denominators live in the 2-localization.
Exterior powers are computed in this group ring, where every <a> is a line
element with <a>^2 = <1>; the map to GW(k) is a map of lambda-rings.

Witt classes are decided by :func:`witt_canonicalize`: Springer splitting
at each Laurent variable down to the base field, where a form over F_p is
classified by dimension and discriminant and a form over R by signature.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping, Union

from .fields import (
    FieldTower,
    SquareClass,
    TowerMismatch,
    class_literal,
    neg_one_class,
    witt_exponent,
)
from .lambda_universal import GammaCoeffTable
from .numkit import is_two_local, reduce_two_local

__all__ = [
    "DiagonalForm",
    "GWElement",
    "WittClass",
    "lambda_form",
    "lambda_powers",
    "lambda_virtual",
    "witt_canonicalize",
    "witt_equal",
    "gw_equal",
    "lift_witt_to_I",
    "gamma",
    "gamma_all",
    "witt_eval_2local",
    "adams2",
    "ideal_power_membership",
    "ideal_power_subgroup",
]


@dataclass(frozen=True)
class DiagonalForm:
    """The diagonal form <a_1, ..., a_n>; the empty form is zero."""

    tower: FieldTower
    entries: tuple[SquareClass, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        for e in self.entries:
            if e.tower != self.tower:
                raise TowerMismatch(f"entry over {e.tower} in a form over {self.tower}")

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __add__(self, other: DiagonalForm) -> DiagonalForm:
        _same_tower(self.tower, other.tower)
        return DiagonalForm(self.tower, self.entries + other.entries)

    def tensor(self, other: DiagonalForm) -> DiagonalForm:
        _same_tower(self.tower, other.tower)
        return DiagonalForm(self.tower, tuple(a * b for a in self.entries for b in other.entries))

    def to_gw(self) -> GWElement:
        coeffs: dict[int, int] = {}
        for e in self.entries:
            coeffs[e.bits] = coeffs.get(e.bits, 0) + 1
        return GWElement(self.tower, coeffs)

    def __str__(self) -> str:
        return "<" + ", ".join(str(e) for e in self.entries) + ">"


def _same_tower(a: FieldTower, b: FieldTower) -> None:
    if a != b:
        raise TowerMismatch(f"{a} vs {b}")


Coeffs = Mapping[int, Rational]


class GWElement:
    """Rational combination sum c_a <a> over the square classes of a tower.

    ``==`` compares representations coefficientwise; use :func:`gw_equal`
    or :func:`witt_equal` for equality in GW(k) or W(k).
    """

    __slots__ = ("tower", "_c")

    def __init__(self, tower: FieldTower, coeffs: Coeffs | Iterable[tuple[int, Rational]] = ()):
        self.tower = tower
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[int, Fraction] = {}
        n = tower.nclasses
        for bits, v in items:
            if isinstance(bits, SquareClass):
                _same_tower(bits.tower, tower)
                bits = bits.bits
            if not 0 <= bits < n:
                raise ValueError(f"class bitmask {bits} out of range for {tower}")
            c[bits] = c.get(bits, 0) + v
        self._c = {b: Fraction(v) for b, v in c.items() if v != 0}

    @classmethod
    def zero(cls, tower: FieldTower) -> GWElement:
        return cls(tower)

    @classmethod
    def one(cls, tower: FieldTower) -> GWElement:
        return cls(tower, {0: 1})

    @classmethod
    def line(cls, a: SquareClass, c: Rational = 1) -> GWElement:
        return cls(a.tower, {a.bits: c})

    @classmethod
    def scalar(cls, tower: FieldTower, c: Rational) -> GWElement:
        return cls(tower, {0: c})

    def coefficient(self, a: SquareClass | int) -> Fraction:
        bits = a.bits if isinstance(a, SquareClass) else a
        return self._c.get(bits, Fraction(0))

    def raw(self) -> dict[int, Fraction]:
        return dict(self._c)

    def items(self):
        return [(SquareClass(self.tower, b), c) for b, c in sorted(self._c.items())]

    @property
    def rank(self) -> Fraction:
        return sum(self._c.values(), Fraction(0))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._c.values())

    def is_two_local(self) -> bool:
        return all(is_two_local(c) for c in self._c.values())

    def is_zero(self) -> bool:
        return not self._c

    def positive_part(self) -> GWElement:
        return GWElement(self.tower, {b: c for b, c in self._c.items() if c > 0})

    def negative_part(self) -> GWElement:
        """Q with self = positive_part() - Q and Q effective."""
        return GWElement(self.tower, {b: -c for b, c in self._c.items() if c < 0})

    def _coerce(self, other) -> GWElement:
        if isinstance(other, GWElement):
            _same_tower(self.tower, other.tower)
            return other
        if isinstance(other, Rational):
            return GWElement.scalar(self.tower, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GWElement(self.tower, list(self._c.items()) + list(other._c.items()))

    __radd__ = __add__

    def __neg__(self) -> GWElement:
        return GWElement(self.tower, {b: -c for b, c in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            return GWElement(self.tower, {b: c * other for b, c in self._c.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, Fraction] = {}
        for a, ca in self._c.items():
            for b, cb in other._c.items():
                k = a ^ b
                out[k] = out.get(k, 0) + ca * cb
        return GWElement(self.tower, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> GWElement:
        if e < 0:
            raise ValueError("negative powers are not defined")
        result = GWElement.one(self.tower)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, GWElement):
            return self.tower == other.tower and self._c == other._c
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        return f"GWElement({self.tower}, {self})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for b, c in sorted(self._c.items()):
            lit = f"<{class_literal(self.tower, b)}>"
            if c == 1:
                parts.append(lit)
            elif c == -1:
                parts.append("-" + lit)
            else:
                parts.append(f"{c}{lit}")
        return " + ".join(parts).replace("+ -", "- ")


GWLike = Union[GWElement, DiagonalForm]


def _as_gw(x: GWLike) -> GWElement:
    return x.to_gw() if isinstance(x, DiagonalForm) else x


# -- exterior powers -------------------------------------------------------


def _lambda_effective(counts: Mapping[int, int], tower: FieldTower, N: int) -> list[dict[int, int]]:
    """lambda^0..lambda^N of an effective form, as elementary symmetric sums.

    counts maps a class bitmask to its multiplicity.
    """
    polys: list[dict[int, int]] = [{0: 1}] + [{} for _ in range(N)]
    top = 0
    for bits, mult in counts.items():
        for _ in range(mult):
            top = min(top + 1, N)
            for k in range(top, 0, -1):
                src = polys[k - 1]
                if not src:
                    continue
                dst = polys[k]
                for b, c in src.items():
                    kb = b ^ bits
                    dst[kb] = dst.get(kb, 0) + c
    return polys


def lambda_form(i: int, phi: DiagonalForm) -> GWElement:
    """lambda^i <a_1..a_n> = sum over i-element subsets S of <prod_{j in S} a_j>."""
    if i < 0:
        raise ValueError("i must be >= 0")
    if i > phi.dim:
        return GWElement.zero(phi.tower)
    counts = {b: int(c) for b, c in phi.to_gw().raw().items()}
    return GWElement(phi.tower, _lambda_effective(counts, phi.tower, i)[i])


def _mul_raw(a: Mapping[int, int], b: Mapping[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for x, cx in a.items():
        for y, cy in b.items():
            k = x ^ y
            out[k] = out.get(k, 0) + cx * cy
    return out


def lambda_powers(x: GWLike, N: int) -> list[GWElement]:
    """[lambda^0(x), ..., lambda^N(x)] for an integral virtual form x.

    Writes x = P - Q with P, Q effective and uses
    lambda^n(P - Q) = sum_{a+b=n} lambda^a(P) mu^b(Q), where mu is the
    inverse series of lambda(Q): mu^0 = 1, mu^b = -sum_{c=1}^b lambda^c(Q) mu^(b-c).
    """
    x = _as_gw(x)
    if not x.is_integral():
        raise ValueError("exterior powers need integer coefficients")
    tower = x.tower
    raw = x.raw()
    P = {b: int(c) for b, c in raw.items() if c > 0}
    Q = {b: int(-c) for b, c in raw.items() if c < 0}
    lp = _lambda_effective(P, tower, N)
    lq = _lambda_effective(Q, tower, N)
    mu: list[dict[int, int]] = [{0: 1}]
    for b in range(1, N + 1):
        acc: dict[int, int] = {}
        for c in range(1, b + 1):
            if lq[c]:
                for k, v in _mul_raw(lq[c], mu[b - c]).items():
                    acc[k] = acc.get(k, 0) - v
        mu.append(acc)
    out = []
    for n in range(N + 1):
        acc: dict[int, int] = {}
        for a in range(n + 1):
            if lp[a] and mu[n - a]:
                for k, v in _mul_raw(lp[a], mu[n - a]).items():
                    acc[k] = acc.get(k, 0) + v
        out.append(GWElement(tower, acc))
    return out


def lambda_virtual(i: int, x: GWLike) -> GWElement:
    if i < 0:
        raise ValueError("i must be >= 0")
    return lambda_powers(x, i)[i]


def adams2(x: GWLike) -> GWElement:
    """psi^2(x) = x^2 - 2 lambda^2(x)."""
    x = _as_gw(x)
    return x * x - lambda_virtual(2, x) * 2


# -- Witt classes -----------------------------------------------------------


@dataclass(frozen=True)
class WittClass:
    """Canonical Witt value.

    ``tree`` is a leaf when the tower has no Laurent variables, otherwise the
    pair (even part, odd part) for the outermost variable, each a tree over
    the residue tower. A prime-field leaf is ``(dim, disc)`` with dim <= 2
    and disc the base bit of the discriminant; a real leaf is the signature.
    """

    tower: FieldTower
    tree: object

    def leaves(self) -> list:
        out = []

        def walk(t, m):
            if m == 0:
                out.append(t)
            else:
                walk(t[0], m - 1)
                walk(t[1], m - 1)

        walk(self.tree, self.tower.m)
        return out

    def is_zero(self) -> bool:
        if self.tower.is_real:
            return all(s == 0 for s in self.leaves())
        return all(leaf == (0, 0) for leaf in self.leaves())

    def in_fundamental_ideal(self) -> bool:
        """Even dimension, i.e. membership in I = ker(W -> Z/2)."""
        if self.tower.is_real:
            total = sum(self.leaves(), Fraction(0))
            return reduce_two_local(total, 1) == 0
        return sum(d for d, _ in self.leaves()) % 2 == 0

    def representative(self) -> DiagonalForm:
        """A diagonal form with this Witt class (integral real signatures only)."""
        tower = self.tower
        entries: list[SquareClass] = []

        def walk(t, m, shift):
            if m == 0:
                if tower.is_real:
                    s = Fraction(t)
                    if s.denominator != 1:
                        raise ValueError(f"signature {s} has no diagonal representative")
                    cls = shift if s > 0 else shift ^ 1
                    entries.extend([SquareClass(tower, cls)] * abs(int(s)))
                else:
                    dim, disc = t
                    if dim == 1:
                        entries.append(SquareClass(tower, shift ^ disc))
                    elif dim == 2:
                        entries.append(SquareClass(tower, shift))
                        entries.append(SquareClass(tower, shift ^ disc))
            else:
                walk(t[0], m - 1, shift)
                walk(t[1], m - 1, shift ^ (1 << m))

        walk(self.tree, tower.m, 0)
        return DiagonalForm(tower, tuple(entries))

    def __add__(self, other: WittClass) -> WittClass:
        _same_tower(self.tower, other.tower)
        return WittClass(self.tower, _tree_add(self.tower, self.tree, other.tree))

    def __mul__(self, other: WittClass) -> WittClass:
        _same_tower(self.tower, other.tower)
        prod = self.representative().to_gw() * other.representative().to_gw()
        return witt_canonicalize(prod)

    def __str__(self) -> str:
        if self.tower.is_real and any(Fraction(s).denominator != 1 for s in self.leaves()):
            return "signatures " + str([str(s) for s in self.leaves()])
        rep = self.representative()
        return "0" if rep.dim == 0 else str(rep)

    def to_json(self):
        def walk(t, m):
            if m == 0:
                if self.tower.is_real:
                    return {"signature": str(t)}
                dim, disc = t
                return {"dim": dim, "disc": "u" if disc else "1"}
            return {"even": walk(t[0], m - 1), "odd": walk(t[1], m - 1)}

        return walk(self.tree, self.tower.m)


def _leaf_reduce(n: int, disc: int, beta: int) -> tuple[int, int]:
    """Anisotropic part over F_p of a form with n entries and discriminant bit disc.

    Any form of dimension >= 3 over a finite field is isotropic, so a
    hyperbolic plane splits off, multiplying the discriminant by -1.
    """
    if n >= 3:
        target = 2 if n % 2 == 0 else 1
        if ((n - target) // 2) % 2:
            disc ^= beta
        n = target
    if n == 2 and disc == beta:
        return (0, 0)
    if n == 0:
        return (0, 0)
    return (n, disc)


def _canon_tree(tower: FieldTower, coeffs: Mapping[int, Fraction], m: int):
    if m == 0:
        if tower.is_real:
            return sum((c if (b & 1) == 0 else -c for b, c in coeffs.items()), Fraction(0))
        beta = neg_one_class(tower).bits & 1
        n = 0
        disc = 0
        for b, c in coeffs.items():
            cnt = int(c)
            cls = b & 1
            if cnt < 0:
                # -c<a> = c<-a> in W
                cnt, cls = -cnt, cls ^ beta
            n += cnt
            if cls and cnt % 2:
                disc ^= 1
        return _leaf_reduce(n, disc, beta)
    top = 1 << m
    even = {b: c for b, c in coeffs.items() if not b & top}
    odd = {b ^ top: c for b, c in coeffs.items() if b & top}
    return (_canon_tree(tower, even, m - 1), _canon_tree(tower, odd, m - 1))


def _tree_add(tower: FieldTower, a, b, m: int | None = None):
    if m is None:
        m = tower.m
    if m == 0:
        if tower.is_real:
            return a + b
        beta = neg_one_class(tower).bits & 1
        return _leaf_reduce(a[0] + b[0], a[1] ^ b[1], beta)
    return (_tree_add(tower, a[0], b[0], m - 1), _tree_add(tower, a[1], b[1], m - 1))


def witt_canonicalize(x: GWLike) -> WittClass:
    """Canonical Witt value of an integral element (rational allowed over R)."""
    x = _as_gw(x)
    if not x.tower.is_real and not x.is_integral():
        raise ValueError("canonicalization over a finite tower needs integer coefficients; "
                         "use witt_eval_2local")
    return WittClass(x.tower, _canon_tree(x.tower, x.raw(), x.tower.m))


def witt_equal(x: GWLike, y: GWLike) -> bool:
    x, y = _as_gw(x), _as_gw(y)
    _same_tower(x.tower, y.tower)
    return witt_canonicalize(x) == witt_canonicalize(y)


def gw_equal(x: GWLike, y: GWLike) -> bool:
    x, y = _as_gw(x), _as_gw(y)
    return x.rank == y.rank and witt_equal(x, y)


def witt_eval_2local(x: GWLike) -> WittClass:
    """Witt value of an element with 2-local coefficients.

    Over a finite tower the Witt group is killed by 2^k, so each coefficient
    is replaced by its image in Z/2^k. Over R the signatures are computed
    exactly as rationals.
    """
    x = _as_gw(x)
    if not x.is_two_local():
        raise ValueError(f"{x} has a coefficient with even denominator")
    exp = witt_exponent(x.tower)
    if exp is None:
        return witt_canonicalize(x)
    k = exp.bit_length() - 1
    reduced = {b: reduce_two_local(c, k) for b, c in x.raw().items()}
    return witt_canonicalize(GWElement(x.tower, reduced))


def lift_witt_to_I(phi: DiagonalForm | WittClass) -> GWElement:
    """Rank-0 element phi - d(<1> + <-1>) with the Witt class of phi (dim phi = 2d)."""
    if isinstance(phi, WittClass):
        phi = phi.representative()
    if phi.dim % 2:
        raise ValueError(f"form of odd dimension {phi.dim} is not in the fundamental ideal")
    tower = phi.tower
    d = phi.dim // 2
    hyper = GWElement.one(tower) + GWElement.line(neg_one_class(tower))
    return phi.to_gw() - hyper * d


# -- divided powers ---------------------------------------------------------


def _check_ideal(x: GWElement) -> None:
    if not x.is_integral():
        raise ValueError("gamma needs an integral representative")
    if x.rank != 0:
        raise ValueError(f"gamma is only defined on the ideal; rank is {x.rank}")


def gamma_all(x: GWLike, coeffs: GammaCoeffTable, N: int | None = None) -> list[GWElement]:
    """[gamma_0(x), ..., gamma_N(x)] with gamma_n = sum_i a(n, i) lambda^i(x)."""
    x = _as_gw(x)
    _check_ideal(x)
    if N is None:
        N = coeffs.N
    if N > coeffs.N:
        raise ValueError(f"coefficient table only covers order {coeffs.N}")
    lam = lambda_powers(x, N)
    out = []
    for n in range(N + 1):
        acc = GWElement.zero(x.tower)
        for i, a in coeffs.row(n).items():
            acc = acc + lam[i] * a
        out.append(acc)
    return out


def gamma(n: int, x: GWLike, coeffs: GammaCoeffTable) -> GWElement:
    if n < 0:
        raise ValueError("n must be >= 0")
    return gamma_all(x, coeffs, n)[n]


# -- powers of the fundamental ideal ----------------------------------------


MAX_MEMBERSHIP_VARIABLES = 2


@lru_cache(maxsize=None)
def _pfister_classes(tower: FieldTower, r: int) -> frozenset:
    """Witt classes of all r-fold Pfister forms <<c_1, ..., c_r>>."""
    minus_one = neg_one_class(tower)
    one_fold = {
        witt_canonicalize(DiagonalForm(tower, (tower.one(), minus_one * c))) for c in tower.classes()
    }
    level = set(one_fold)
    for _ in range(r - 1):
        level = {s * g for s in level for g in one_fold}
    return frozenset(level)


@lru_cache(maxsize=None)
def ideal_power_subgroup(tower: FieldTower, r: int) -> frozenset:
    """The finite subgroup I^r of W(k), as a set of canonical trees."""
    if tower.is_real:
        raise ValueError("ideal power membership needs a finite Witt group")
    if r < 1:
        raise ValueError("r must be >= 1")
    if tower.m > MAX_MEMBERSHIP_VARIABLES:
        raise ValueError(f"membership is enumerated only for towers with <= "
                         f"{MAX_MEMBERSHIP_VARIABLES} Laurent variables")
    gens = [g.tree for g in _pfister_classes(tower, r)]
    zero = witt_canonicalize(GWElement.zero(tower)).tree
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                s = _tree_add(tower, e, g)
                if s not in seen:
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt
    return frozenset(seen)


def ideal_power_membership(x: GWLike | WittClass, r: int) -> bool:
    """Whether the Witt class of x lies in I^r."""
    if isinstance(x, WittClass):
        w = x
    else:
        x = _as_gw(x)
        w = witt_canonicalize(x) if x.is_integral() else witt_eval_2local(x)
    return w.tree in ideal_power_subgroup(w.tower, r)
