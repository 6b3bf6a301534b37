"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
The default output format can be set with the WITTDP_FORMAT environment
variable or a ``format=`` line in a ``--config`` file; flags win over both.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

from .axioms import axiom_suite
from .fields import FieldTower, neg_one_class, parse_class, parse_field
from .gw import DiagonalForm, gamma, lift_witt_to_I, witt_eval_2local
from .lambda_universal import (
    GammaCoeffTable,
    gamma_coeffs_mod2,
    gamma_coeffs_recurrence,
    gamma_table,
)
from .milnor import compatibility_check, milnor_gamma, parse_symbols
from .pfister import (
    PfisterForm,
    expand,
    gamma_pfister_closed,
    pfister_gamma,
    verify_gamma2_pfister,
)
from .tangent import build_table
from .verify import SUITES, RunConfig, run_verify_all

FORMATS = ("text", "json", "csv")
ENV_FORMAT = "WITTDP_FORMAT"
HARD_DEFAULTS = {"format": "text", "seed": 0, "trials": 100}


class UsageError(Exception):
    pass


@dataclass
class Output:
    path: str | None

    def write(self, text: str) -> None:
        if not text.endswith("\n"):
            text += "\n"
        if self.path in (None, "-"):
            sys.stdout.write(text)
        else:
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(text)


def read_config(path: str) -> dict[str, str]:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = line.split("=", 1)
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


# -- subcommands -------------------------------------------------------------


def cmd_tangent(args, out: Output) -> int:
    N = args.max
    t = build_table(N)
    rows = [list(t.rows[n]) for n in range(N + 1)]
    if args.format == "json":
        out.write(json.dumps({"N": N, "rows": rows}))
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n"] + list(range(N + 1)))
        for n, row in enumerate(rows):
            w.writerow([n] + row + [0] * (N - n))
        out.write(buf.getvalue())
    else:
        width = len(str(max(max(r) for r in rows)))
        lines = []
        for n, row in enumerate(rows):
            cells = [str(v).rjust(width) if v else " " * width for v in row]
            lines.append(f"{n:>3} | " + " ".join(cells).rstrip())
        out.write("\n".join(lines))
    return 0


def _term_text(c, i) -> str:
    mon = "1" if i == 0 else ("x" if i == 1 else f"L{i}(x)")
    if c == 1:
        return mon
    if c == -1:
        return "-" + mon
    return f"{c}*{mon}"


def cmd_coeffs(args, out: Output) -> int:
    N = args.max
    if args.mod2:
        bits = gamma_coeffs_mod2(N)
        rows = [{i: 1 for i in sorted(b)} for b in bits]
    else:
        table = gamma_coeffs_recurrence(N)
        rows = [dict(sorted(r.items())) for r in table.rows()]
    if args.format == "json":
        payload = {
            "N": N,
            "rows": [
                {"n": n, "terms": [
                    {"i": i, "num": str(c.numerator), "den": str(c.denominator)}
                    for i, c in row.items()
                ]}
                for n, row in enumerate(rows)
            ],
        }
        if args.mod2:
            payload["mod2"] = True
        out.write(json.dumps(payload))
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "i", "num", "den"])
        for n, row in enumerate(rows):
            for i, c in row.items():
                w.writerow([n, i, c.numerator, c.denominator])
        out.write(buf.getvalue())
    else:
        suffix = "  (mod 2)" if args.mod2 else ""
        lines = []
        for n, row in enumerate(rows):
            terms = [_term_text(c, i) for i, c in sorted(row.items(), reverse=True)]
            body = " + ".join(terms).replace("+ -", "- ") if terms else "0"
            lines.append(f"gamma_{n}(x) = {body}{suffix}")
        out.write("\n".join(lines))
    return 0


def _parse_form(tower: FieldTower, text: str) -> DiagonalForm:
    text = text.strip()
    if not text:
        return DiagonalForm(tower, ())
    return DiagonalForm(tower, tuple(parse_class(tower, tok) for tok in text.split(",")))


def _witt_payload(w) -> dict:
    return {"witt": w.to_json(), "value": str(w)}


def cmd_gamma(args, out: Output) -> int:
    tower = parse_field(args.field)
    phi = _parse_form(tower, args.form)
    if phi.dim % 2:
        raise UsageError(f"form {phi} has odd dimension; gamma is defined on even-dimensional forms")
    if args.n < 0:
        raise UsageError("-n must be >= 0")
    if args.mod2_path:
        if not neg_one_class(tower).is_trivial() or not tower.is_finite:
            raise UsageError(f"--mod2-path needs -1 to be a square; it is not in {tower}")
        coeffs = GammaCoeffTable.from_mod2(gamma_coeffs_mod2(args.n))
    else:
        coeffs = gamma_table(args.n)
    w = witt_eval_2local(gamma(args.n, lift_witt_to_I(phi), coeffs))
    if args.format == "json":
        out.write(_dump_json({"field": str(tower), "form": str(phi), "n": args.n,
                              "path": "mod2" if args.mod2_path else "theorem", **_witt_payload(w)}))
    else:
        out.write(f"gamma_{args.n}(lift {phi}) over {tower} = {w}")
    return 0


def cmd_pfister(args, out: Output) -> int:
    tower = parse_field(args.field)
    slots = tuple(parse_class(tower, tok) for tok in args.slots.split(","))
    pf = PfisterForm(tower, slots)
    result = {"field": str(tower), "pfister": str(pf), "expansion": str(expand(pf))}
    if tower.is_finite:
        result["gamma2_identity"] = verify_gamma2_pfister(pf)
    if args.n is not None:
        w = pfister_gamma(args.n, [pf])
        result["n"] = args.n
        result["gamma"] = _witt_payload(w)
        if tower.is_finite and neg_one_class(tower).is_trivial() and args.n >= 1:
            closed = gamma_pfister_closed(args.n, pf)
            result["closed"] = _witt_payload(closed)
            result["closed_agrees"] = closed == w
    if args.format == "json":
        out.write(_dump_json(result))
    else:
        lines = [f"{pf} over {tower} = {result['expansion']}"]
        if "gamma2_identity" in result:
            lines.append(f"gamma_2 = 2^(r-1) * form in W: {result['gamma2_identity']}")
        if "gamma" in result:
            lines.append(f"gamma_{args.n} = {result['gamma']['value']}")
        if "closed" in result:
            lines.append(f"closed formula: {result['closed']['value']} (agrees: {result['closed_agrees']})")
        out.write("\n".join(lines))
    ok = result.get("gamma2_identity", True) and result.get("closed_agrees", True)
    return 0 if ok else 1


def cmd_milnor(args, out: Output) -> int:
    tower = parse_field(args.field)
    sigma = parse_symbols(tower, args.symbols)
    try:
        g = milnor_gamma(args.n, sigma)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = {"field": str(tower), "symbols": str(sigma), "n": args.n, "gamma": str(g)}
    code = 0
    if args.check_compat:
        try:
            ok = compatibility_check(args.n, sigma)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        result["compatible"] = ok
        code = 0 if ok else 1
    if args.format == "json":
        out.write(_dump_json(result))
    else:
        lines = [f"gamma_{args.n}({sigma}) = {g}"]
        if "compatible" in result:
            lines.append(f"compatible with W modulo I^{args.n * sigma.degree + 1}: {result['compatible']}")
        out.write("\n".join(lines))
    return code


def cmd_verify_axioms(args, out: Output) -> int:
    tower = parse_field(args.field)
    report = axiom_suite(tower, args.trials, args.seed)
    payload = report.to_json()
    if args.format == "json" or not report.ok:
        out.write(_dump_json(payload))
    else:
        lines = [f"{tower}: {args.trials} trials, seed {args.seed}"]
        for name, c in payload["counts"].items():
            lines.append(f"  {name:<18} {c['passed']} passed, {c['failed']} failed")
        out.write("\n".join(lines))
    return 0 if report.ok else 1


def cmd_verify_all(args, out: Output) -> int:
    suites = None
    if args.suites is not None:
        suites = tuple(s for s in args.suites.split(",") if s)
        if not suites:
            raise UsageError("empty suite selection")
    cfg = RunConfig(seed=args.seed, trials=args.trials, suites=suites,
                    timings=not args.no_timings, fault=args.inject_fault)
    try:
        report = run_verify_all(cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        out.write(_dump_json(report))
    else:
        lines = []
        for name, s in report["suites"].items():
            status = "PASS" if s["ok"] else "FAIL"
            t = f" ({s['seconds']}s)" if "seconds" in s else ""
            lines.append(f"{status} {name}: {s['checks']} checks, {s['failed']} failed{t}")
        lines.append(f"seed {report['seed']}: {'all suites pass' if report['ok'] else 'FAILURES'}")
        out.write("\n".join(lines))
    return 0 if report["ok"] else 1


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=None,
                        help=f"output format (default: ${ENV_FORMAT} or text)")
    common.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")
    common.add_argument("--config", default=None, help="key=value file with default settings")

    parser = argparse.ArgumentParser(
        prog="wittdp",
        description="Divided powers on the Witt ring: tables, exterior-power calculus, "
                    "Pfister forms and Milnor K-theory mod 2.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tangent", parents=[common], help="tangent-number triangle T(n,i)")
    p.add_argument("--max", type=int, default=None, help="largest row N")
    p.set_defaults(func=cmd_tangent, needs=("max",))

    p = sub.add_parser("coeffs", parents=[common], help="gamma_n coefficients in the lambda basis")
    p.add_argument("--max", type=int, default=None, help="largest order N")
    p.add_argument("--mod2", action="store_true", help="binomial coefficients mod 2")
    p.set_defaults(func=cmd_coeffs, needs=("max",))

    p = sub.add_parser("gamma", parents=[common], help="gamma_n of an even-dimensional form")
    p.add_argument("-n", type=int, default=None)
    p.add_argument("--field", default=None, help="e.g. F13((t1))((t2)), R, R((t1))")
    p.add_argument("--form", required=True, help='comma-separated classes, e.g. "1,u*t1"')
    p.add_argument("--mod2-path", action="store_true",
                   help="use the binomial mod-2 formula (needs -1 to be a square)")
    p.set_defaults(func=cmd_gamma, needs=("n", "field"))

    p = sub.add_parser("pfister", parents=[common], help="Pfister form expansion and divided powers")
    p.add_argument("--field", default=None)
    p.add_argument("--slots", required=True, help="comma-separated slot classes")
    p.add_argument("-n", type=int, default=None)
    p.set_defaults(func=cmd_pfister, needs=("field",))

    p = sub.add_parser("milnor", parents=[common], help="divided powers on K^M/2")
    p.add_argument("--field", default=None)
    p.add_argument("--symbols", required=True, help='e.g. "{t1,t2}+{u,t1}"')
    p.add_argument("-n", type=int, default=None)
    p.add_argument("--check-compat", action="store_true")
    p.set_defaults(func=cmd_milnor, needs=("field", "n"))

    p = sub.add_parser("verify", help="run verification suites")
    vsub = p.add_subparsers(dest="target", required=True)
    v = vsub.add_parser("axioms", parents=[common], help="randomized axiom suite on one field")
    v.add_argument("--field", default=None)
    v.add_argument("--trials", type=int, default=None)
    v.add_argument("--seed", type=int, default=None)
    v.set_defaults(func=cmd_verify_axioms, needs=("field",))
    v = vsub.add_parser("all", parents=[common], help="every acceptance suite")
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--trials", type=int, default=None)
    v.add_argument("--suites", default=None, help="comma-separated subset of: " + ", ".join(SUITES))
    v.add_argument("--no-timings", action="store_true", help="omit timing fields")
    v.add_argument("--inject-fault", default=None, help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify_all, needs=())
    return parser


_INT_KEYS = {"max", "n", "trials", "seed"}


def _apply_defaults(args, parser: argparse.ArgumentParser) -> None:
    config = read_config(args.config) if getattr(args, "config", None) else {}
    env_format = os.environ.get(ENV_FORMAT)
    for key, value in vars(args).copy().items():
        if value is not None:
            continue
        if key in config:
            value = config[key]
            if key in _INT_KEYS:
                try:
                    value = int(value)
                except ValueError:
                    raise UsageError(f"config value for {key} must be an integer") from None
        elif key == "format" and env_format:
            value = env_format
        elif key in HARD_DEFAULTS:
            value = HARD_DEFAULTS[key]
        setattr(args, key, value)
    if getattr(args, "format", None) not in FORMATS:
        raise UsageError(f"unknown format {args.format!r}")
    missing = [k for k in args.needs if getattr(args, k, None) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + k for k in missing))
    for key in ("max", "trials"):
        v = getattr(args, key, None)
        if v is not None and v < 0:
            raise UsageError(f"--{key} must be >= 0")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _apply_defaults(args, parser)
        return args.func(args, Output(args.output))
    except (UsageError, ValueError, OSError) as exc:
        print(f"wittdp: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
