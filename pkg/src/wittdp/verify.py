"""Top-level verification driver: one suite per acceptance check."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable

from .axioms import axiom_suite
from .fields import FieldTower
from .gw import (
    DiagonalForm,
    GWElement,
    gamma,
    gamma_all,
    ideal_power_membership,
    lift_witt_to_I,
    witt_eval_2local,
)
from .lambda_universal import (
    IntegrityError,
    LambdaVector,
    gamma_coeffs_closed,
    gamma_coeffs_mod2,
    gamma_coeffs_recurrence,
    gamma_table,
    lambda2,
    lambda2_basis,
    mul_basis,
    verify_axiom2,
    verify_axiom4,
)
from .milnor import SymbolSum, compatibility_check
from .numkit import is_two_local, reduce_two_local
from .pfister import (
    PfisterForm,
    expand,
    gamma_pfister_closed,
    gamma_sum_pfister,
    pfister_gamma,
    verify_gamma2_pfister,
)
from .tangent import build_table, discover_bernoulli_convention, series_oracle

__all__ = ["REFERENCE_TANGENT_ROWS", "SUITES", "RunConfig", "run_verify_all", "SuiteResult"]

# Reference values for rows 0-9 of the tangent triangle; zeros off the checkerboard.
REFERENCE_TANGENT_ROWS = (
    (1,),
    (0, 1),
    (0, 0, 1),
    (0, 2, 0, 1),
    (0, 0, 8, 0, 1),
    (0, 16, 0, 20, 0, 1),
    (0, 0, 136, 0, 40, 0, 1),
    (0, 272, 0, 616, 0, 70, 0, 1),
    (0, 0, 3968, 0, 2016, 0, 112, 0, 1),
    (0, 7936, 0, 28160, 0, 5376, 0, 168, 0, 1),
)

# gamma_1..gamma_4 over an arbitrary field, and when -1 is a square
PRINTED_GAMMA = {
    1: {1: Fraction(1)},
    2: {2: Fraction(1)},
    3: {3: Fraction(1), 1: Fraction(-1, 3)},
    4: {4: Fraction(1), 2: Fraction(-2, 3)},
}
PRINTED_GAMMA_MOD2 = {1: {1}, 2: {2}, 3: {3, 1}, 4: {4}}

AXIOM_TOWERS = tuple(FieldTower(p, m) for p in (3, 5, 13) for m in (0, 1, 2))
F13_TOWERS = tuple(FieldTower(13, m) for m in (0, 1, 2))
MILNOR_TOWER = FieldTower(13, 2)


@dataclass
class RunConfig:
    seed: int = 0
    trials: int = 100
    suites: tuple[str, ...] | None = None
    timings: bool = True
    fault: str | None = None


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.checks > 0 and not self.failures

    def check(self, passed: bool, **inputs) -> None:
        self.checks += 1
        if not passed:
            self.failures.append(inputs)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checks": self.checks,
            "failed": len(self.failures),
            "failures": self.failures[:20],
            "details": self.details,
        }


def _tangent_for(N: int, cfg: RunConfig):
    t = build_table(N)
    if cfg.fault == "tangent" and N >= 7:
        t = t.with_entry(7, 3, t(7, 3) + 1)
    return t


def suite_tangent_table(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("tangent-table")
    t = _tangent_for(9, cfg)
    for n, row in enumerate(REFERENCE_TANGENT_ROWS):
        for i, v in enumerate(row):
            res.check(t(n, i) == v, n=n, i=i, expected=v, got=t(n, i))
    res.details = {"T(7,3)": t(7, 3), "T(8,2)": t(8, 2), "T(9,1)": t(9, 1)}
    return res


def suite_tangent_oracle(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("tangent-oracle")
    t, s = _tangent_for(24, cfg), series_oracle(24)
    for n in range(25):
        for i in range(n + 1):
            res.check(t(n, i) == s(n, i), n=n, i=i, recurrence=str(t(n, i)), series=str(s(n, i)))
    res.details = {"N": 24}
    return res


def suite_gamma_coeffs(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("gamma-coeffs")
    N = 40
    rec = gamma_coeffs_recurrence(N)
    closed = gamma_coeffs_closed(N, _tangent_for(N, cfg))
    for n in range(N + 1):
        for i in range(n + 1):
            a, b = rec(n, i), closed(n, i)
            res.check(a == b, n=n, i=i, recurrence=str(a), closed=str(b))
            res.check(is_two_local(a), n=n, i=i, value=str(a), reason="even denominator")
            if (n - i) % 2:
                res.check(a == 0, n=n, i=i, value=str(a), reason="parity")
        res.check(rec(n, n) == 1, n=n, reason="leading coefficient")
    res.details = {"N": N, "max_denominator_bits": max(
        rec(n, i).denominator.bit_length() for n in range(N + 1) for i in range(n + 1))}
    return res


def suite_printed_formulas(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("printed-formulas")
    table = gamma_coeffs_recurrence(4)
    for n, expected in PRINTED_GAMMA.items():
        got = table.row(n)
        res.check(got == LambdaVector(expected), n=n, got=repr(got))
    res.details = {f"gamma_{n}": repr(table.row(n)) for n in PRINTED_GAMMA}
    return res


def suite_corollary_mod2(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("corollary-mod2")
    N = 64
    closed = gamma_coeffs_closed(N, _tangent_for(N, cfg))
    bits = gamma_coeffs_mod2(N)
    for n in range(N + 1):
        reduced = frozenset(i for i in range(n + 1) if reduce_two_local(closed(n, i), 1))
        res.check(reduced == bits[n], n=n, closed=sorted(reduced), binomial=sorted(bits[n]))
    for n, expected in PRINTED_GAMMA_MOD2.items():
        res.check(bits[n] == frozenset(expected), n=n, got=sorted(bits[n]))
    return res


def suite_universal(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("universal-identities")
    table = gamma_coeffs_recurrence(16)
    for m in range(17):
        for n in range(17 - m):
            res.check(verify_axiom4(m, n, table), identity="axiom4", m=m, n=n)
    for n in range(9):
        res.check(verify_axiom2(n, table), identity="axiom2", n=n)
    for a in range(16):
        for b in range(16 - a):
            for c in range(16 - a - b):
                A, B, C = (LambdaVector.basis(k) for k in (a, b, c))
                res.check((A * B) * C == A * (B * C), identity="associativity", a=a, b=b, c=c)
    for r in range(5):
        res.check(lambda2_basis(2**r).mod2() == {2 ** (r + 1)},
                  identity="lambda2 of lambda^(2^r)", r=r)
        it = LambdaVector.basis(1)
        for _ in range(r):
            it = lambda2(it)
        res.check(it.mod2() == table.row(2**r).mod2(), identity="iterated lambda2", r=r)
    res.details = {"mul_basis(2,2)": repr(mul_basis(2, 2)), "lambda2_basis(2)": repr(lambda2_basis(2))}
    return res


def suite_axioms(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("axioms")
    for tower in AXIOM_TOWERS:
        rep = axiom_suite(tower, cfg.trials, cfg.seed)
        for name, c in rep.counts.items():
            res.checks += c["passed"] + c["failed"]
        res.failures.extend(rep.failures)
        res.details[str(tower)] = {k: rep.counts[k] for k in sorted(rep.counts)}
    return res


def _random_pfister(rng: random.Random, tower: FieldTower, r: int) -> PfisterForm:
    classes = list(tower.classes())
    return PfisterForm(tower, tuple(rng.choice(classes) for _ in range(r)))


def suite_pfister(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("pfister")
    rng = random.Random(f"pfister/{cfg.seed}")
    for tower in AXIOM_TOWERS:
        for r in (1, 2, 3):
            for _ in range(5):
                pf = _random_pfister(rng, tower, r)
                res.check(verify_gamma2_pfister(pf), check="gamma2", tower=str(tower), form=str(pf))
    for tower in F13_TOWERS:
        for r in (1, 2, 3):
            for _ in range(4):
                pf = _random_pfister(rng, tower, r)
                general = gamma_all(lift_witt_to_I(expand(pf)), gamma_table(6), 6)
                for n in range(1, 7):
                    ok = witt_eval_2local(general[n]) == gamma_pfister_closed(n, pf)
                    res.check(ok, check="closed", tower=str(tower), form=str(pf), n=n)
        for k in (1, 2, 3):
            for _ in range(4):
                pfs = [_random_pfister(rng, tower, 2) for _ in range(k)]
                for n in range(4):
                    ok = pfister_gamma(n, pfs, tower) == gamma_sum_pfister(n, pfs, tower)
                    res.check(ok, check="sum", tower=str(tower), forms=[str(p) for p in pfs], n=n)
    return res


def _random_symbol_sum(rng: random.Random, tower: FieldTower, r: int, kmax: int = 3) -> SymbolSum:
    classes = list(tower.classes())
    syms = [tuple(rng.choice(classes) for _ in range(r)) for _ in range(rng.randint(0, kmax))]
    return SymbolSum.of(tower, r, syms)


def suite_filtration_milnor(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("filtration-milnor")
    tower = MILNOR_TOWER
    rng = random.Random(f"milnor/{cfg.seed}")
    for _ in range(50):
        pfs = [_random_pfister(rng, tower, 2) for _ in range(rng.randint(1, 3))]
        x = GWElement.zero(tower)
        for pf in pfs:
            x = x + lift_witt_to_I(expand(pf)) * rng.choice((1, -1))
        res.check(ideal_power_membership(x, 2), check="input in I^2", forms=[str(p) for p in pfs])
        for n in (2, 3):
            g = gamma(n, x, gamma_table(n))
            res.check(ideal_power_membership(g, 2 * n), check="gamma_n(I^2) in I^2n",
                      forms=[str(p) for p in pfs], n=n)
    for _ in range(50):
        sigma = _random_symbol_sum(rng, tower, 2)
        for n in (2, 3):
            res.check(compatibility_check(n, sigma), check="compatibility", symbols=str(sigma), n=n)
    return res


def suite_real_base(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("real-base")
    R = FieldTower.real()
    plus, minus = R.one(), R.base_nonsquare()
    rng = random.Random(f"real/{cfg.seed}")
    table = gamma_table(6)
    for sig in range(-6, 7, 2):
        pos = max(sig, 0) + rng.randint(0, 2)
        neg = pos - sig
        if (pos + neg) % 2:
            pos, neg = pos + 1, neg + 1
        phi = DiagonalForm(R, (plus,) * pos + (minus,) * neg)
        gx = gamma_all(lift_witt_to_I(phi), table, 6)
        for n in range(7):
            got = witt_eval_2local(gx[n]).tree
            want = Fraction(sig) ** n / factorial(n)
            res.check(got == want, signature=sig, n=n, got=str(got), expected=str(want))
    a31 = gamma_coeffs_recurrence(3)(3, 1)
    res.check(is_two_local(a31) and a31.denominator != 1, reason="a(3,1) is 2-local, not integral")
    x = lift_witt_to_I(DiagonalForm(R, (plus, plus)))
    g3 = witt_eval_2local(gamma(3, x, table)).tree
    res.check(g3 == Fraction(4, 3), reason="signature of gamma_3 at signature 2", got=str(g3))
    res.details = {
        "a(3,1)": str(a31),
        "a(3,1) two-local": is_two_local(a31),
        "a(3,1) integral": a31.denominator == 1,
        "signature(gamma_3(x)), signature(x)=2": str(g3),
    }
    return res


def suite_bernoulli(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("bernoulli-convention")
    table = _tangent_for(17, cfg)
    found = discover_bernoulli_convention(8, table)
    res.check(len(found["matching"]) == 1, matching=found["matching"])
    res.details = {
        "matching_convention": found["matching"],
        "printed_index_T(2n+1,1)_matches": found["printed_index_matches"],
        "matches": found["matches"],
    }
    return res


SUITES: dict[str, Callable[[RunConfig], SuiteResult]] = {
    "tangent-table": suite_tangent_table,
    "tangent-oracle": suite_tangent_oracle,
    "gamma-coeffs": suite_gamma_coeffs,
    "printed-formulas": suite_printed_formulas,
    "corollary-mod2": suite_corollary_mod2,
    "universal-identities": suite_universal,
    "axioms": suite_axioms,
    "pfister": suite_pfister,
    "filtration-milnor": suite_filtration_milnor,
    "real-base": suite_real_base,
    "bernoulli-convention": suite_bernoulli,
}


def run_verify_all(cfg: RunConfig) -> dict:
    """Run the selected suites in name order and assemble a JSON-ready report."""
    names = list(SUITES) if cfg.suites is None else list(cfg.suites)
    if not names:
        raise ValueError("empty suite selection")
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suites: {', '.join(unknown)}")
    suites = {}
    for name in sorted(set(names)):
        t0 = time.perf_counter()
        try:
            result = SUITES[name](cfg).to_json()
        except IntegrityError as exc:
            # a corrupted table can break 2-integrality before any comparison runs
            crashed = SuiteResult(name)
            crashed.check(False, error=str(exc))
            result = crashed.to_json()
        if cfg.timings:
            result["seconds"] = round(time.perf_counter() - t0, 3)
        suites[name] = result
    return {
        "seed": cfg.seed,
        "trials": cfg.trials,
        "ok": all(s["ok"] for s in suites.values()),
        "suites": suites,
    }
