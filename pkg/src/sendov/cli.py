"""Command-line front end: ``sendov <subcommand> [flags]``.

Exit codes: 0 success, 1 usage/domain/input error, 2 non-convergence,
3 a verification suite reported violations or trial errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from . import bounds, geometry, propverify, threshold
from .errors import ConvergenceError, DomainError, SendovError, ThresholdOverflowError
from .polycore import Polynomial, load_complex_list
from .rootsolver import all_roots

EXIT_OK, EXIT_INPUT, EXIT_CONVERGENCE, EXIT_VIOLATIONS = 0, 1, 2, 3


class UsageError(Exception):
    pass


class InputError(Exception):
    """Carries its own message prefix (json error, io error)."""

    def __init__(self, prefix: str, msg: str):
        super().__init__(msg)
        self.prefix = prefix


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _complex(text: str) -> complex:
    """Accept ``re,im``, ``[re, im]`` or a bare real."""
    t = text.strip()
    try:
        if t.startswith("["):
            re_, im = json.loads(t)
            return complex(float(re_), float(im))
        if "," in t:
            re_, im = t.split(",")
            return complex(float(re_), float(im))
        return complex(float(t), 0.0)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"expected re,im or [re, im], got {text!r}") from exc


def _open_fraction(text: str) -> float:
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"value must lie in (0, 1), got {v}")
    return v


def _read_list(path: str) -> list[complex]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError("io error", f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return load_complex_list(text)
    except ValueError as exc:
        raise InputError("json error", f"{path}: {exc}") from exc


def _emit(args, text: str) -> None:
    if args.output:
        try:
            Path(args.output).write_text(text if text.endswith("\n") else text + "\n")
        except OSError as exc:
            raise InputError("io error", f"cannot write {args.output}: {exc.strerror or exc}") from exc
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _g(x, prec: int) -> str:
    return f"{x:.{prec}g}" if isinstance(x, float) else str(x)


def _text_block(d: dict, prec: int) -> str:
    width = max(len(k) for k in d)
    return "\n".join(f"{k:<{width}}  {_g(v, prec)}" for k, v in d.items())


# ---------------------------------------------------------------- subcommands

def cmd_table(args) -> int:
    avals = args.a or [row[0] for row in threshold.PAPER_TABLE]
    rows = threshold.make_table(avals, pinned=args.pinned, rule=args.rule, jobs=args.jobs)
    good = [r for r in rows if isinstance(r, threshold.ThresholdRow)]
    bad = [(a, r) for a, r in zip(avals, rows) if not isinstance(r, threshold.ThresholdRow)]
    for a, exc in bad:
        print(f"row a={a} failed: {exc}", file=sys.stderr)
    if args.format == "csv":
        out = threshold.table_csv(good)
    elif args.format == "json":
        out = threshold.table_json(good)
    else:
        lines = []
        for r in good:
            flag = "  [max(N1,N2,N3) > N]" if r.exceeds else ""
            lines.append(
                f"a={r.a:g} c={r.c:.3f} m={r.m:.3f} r={r.r:.4f} alpha={r.alpha:.2f} "
                f"p={r.p:.3f} q={r.q:.3f} K={r.K:.3f} N={r.N} "
                f"(N1={r.N1} N2={r.N2} N3={r.N3}){flag}")
        out = "\n".join(lines)
    _emit(args, out)
    return EXIT_OK if not bad else EXIT_INPUT


def cmd_threshold(args) -> int:
    if args.c is not None:
        if not args.c < args.a:
            raise DomainError(f"need 0 < c < a, got c={args.c}, a={args.a}")
        if args.m is not None:
            row = threshold.make_row(args.a, args.c, args.m, args.rule, pinned=True)
        else:
            m, _ = threshold.fixed_point_m(args.a, args.c, rule=args.rule)
            row = threshold.make_row(args.a, args.c, m, args.rule)
    else:
        _, row = threshold.optimize_c(args.a, args.rule)
    d = row.to_dict()
    if args.format == "json":
        _emit(args, json.dumps(d, indent=2))
    elif args.format == "csv":
        _emit(args, threshold.table_csv([row]))
    else:
        _emit(args, _text_block(d, args.precision))
    return EXIT_OK


def cmd_constants(args) -> int:
    if not 0 < args.c < args.a:
        raise DomainError(f"need 0 < c < a, got c={args.c}, a={args.a}")
    ctx = bounds.BoundContext.build(args.a, args.c, args.m, args.n)
    d = ctx.to_dict()
    if args.format == "json":
        _emit(args, json.dumps(d))
    else:
        _emit(args, _text_block(d, args.precision))
    return EXIT_OK


def cmd_check(args) -> int:
    if args.roots:
        roots = _read_list(args.roots)
    else:
        p = Polynomial(_read_list(args.poly))
        if p.degree < 2:
            raise DomainError(f"degree must be at least 2, got {p.degree}")
        roots = list(all_roots(p).roots)
    rep = geometry.sendov_report(roots)
    if args.format == "json":
        _emit(args, json.dumps(rep.to_dict()))
    else:
        prec = args.precision
        lines = ["satisfied" if rep.satisfied else "VIOLATED"]
        for z, d in rep.minima:
            lines.append(f"root {_g(z.real, prec)}{z.imag:+.{prec}g}j  min distance {_g(d, prec)}")
        _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    names = list(propverify.SUITES) if args.suite == "all" else [args.suite]
    reports = propverify.run_all(names, args.trials, args.seed, args.max_degree, args.jobs,
                                 args.dump_failures)
    if args.format == "json":
        _emit(args, json.dumps([r.to_dict() for r in reports], sort_keys=True, indent=1))
    else:
        lines = [
            f"{r.suite:<22} trials={r.trials} violations={r.violations} errors={r.errors} "
            f"worst_margin={_g(r.worst_margin, args.precision)} "
            f"{'PASS' if r.passed else 'FAIL'}"
            for r in reports
        ]
        _emit(args, "\n".join(lines))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VIOLATIONS


def cmd_localize(args) -> int:
    p = Polynomial(_read_list(args.poly))
    disk = geometry.localize_zero_disk(p, args.delta, args.omega)
    d: dict = {"center": [disk.center.real, disk.center.imag], "radius": disk.radius}
    if p.degree >= 1 and not (p - args.omega).is_zero and (p - args.omega).degree >= 1:
        sols = all_roots(p - args.omega).roots
        near = min(sols, key=lambda z: abs(z - disk.center))
        d["nearest_solution"] = [near.real, near.imag]
        d["inside"] = bool(abs(near - disk.center) <= disk.radius + 1e-6 * (1 + disk.radius))
    if args.format == "json":
        _emit(args, json.dumps(d))
    else:
        _emit(args, _text_block({k: (complex(*v) if isinstance(v, list) else v) for k, v in d.items()},
                                args.precision))
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sendov", description="Degree thresholds for Sendov's conjecture "
                     "and randomized checks of the supporting inequalities.")
    sub = parser.add_subparsers(dest="command", metavar="subcommand", parser_class=_Parser)
    sub.required = True

    def common(sp, formats=("text", "json"), default="text"):
        sp.add_argument("--format", choices=formats, default=default,
                        help=f"output format, one of {', '.join(formats)} (default {default})")
        sp.add_argument("--precision", type=int, default=6,
                        help="significant digits in text output, integer >= 1 (default 6)")
        sp.add_argument("-o", "--output", help="write output to this path instead of stdout")

    jobs_default = os.cpu_count() or 1
    rule_help = "threshold driving the fixed point: paper (N3) or strict (max(N1,N2,N3))"

    sp = sub.add_parser("table", help="threshold table over a list of a values")
    sp.add_argument("--pinned", action="store_true",
                    help="use the published c and m for each a instead of optimizing")
    sp.add_argument("--a", type=_open_fraction, nargs="+",
                    help="values of a in (0, 1); default: the nine published rows")
    sp.add_argument("--rule", choices=threshold.RULES, default="paper", help=rule_help)
    sp.add_argument("--jobs", type=int, default=jobs_default,
                    help=f"worker count, integer >= 1 (default {jobs_default})")
    common(sp, ("csv", "json", "text"), "csv")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("threshold", help="single row: fixed point in m, optimal c unless given")
    sp.add_argument("--a", type=_open_fraction, required=True, help="distinguished zero, in (0, 1)")
    sp.add_argument("--c", type=_open_fraction, help="evaluation point, in (0, a)")
    sp.add_argument("--m", type=float, help="pin the centroid bound m, real in [a/2 - 1 + a/2, a/2]")
    sp.add_argument("--rule", choices=threshold.RULES, default="paper", help=rule_help)
    common(sp, ("text", "json", "csv"))
    sp.set_defaults(func=cmd_threshold)

    sp = sub.add_parser("constants", help="every bound constant for given a, c, m")
    sp.add_argument("--a", type=_open_fraction, required=True, help="distinguished zero, in (0, 1)")
    sp.add_argument("--c", type=_open_fraction, required=True, help="evaluation point, in (0, a)")
    sp.add_argument("--m", type=float, required=True, help="centroid real part, at most a/2")
    sp.add_argument("--n", type=int, help="degree, integer >= 2 (default: the threshold N)")
    common(sp)
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("check", help="Sendov report for a root list or coefficient list")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--roots", help="JSON array of [re, im] roots, each with |z| <= 1, at least 2")
    src.add_argument("--poly", help="JSON array of [re, im] coefficients, constant term first, degree >= 2")
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("verify", help="seeded randomized property suites")
    sp.add_argument("--suite", choices=["all", *propverify.SUITES], default="all",
                    help="suite name or 'all'")
    sp.add_argument("--trials", type=int, default=1000, help="trials per suite, integer >= 1")
    sp.add_argument("--seed", type=int, default=0, help="unsigned 64-bit seed, in [0, 2^64)")
    sp.add_argument("--max-degree", type=int, default=12, help="largest degree, integer in [2, 32]")
    sp.add_argument("--jobs", type=int, default=jobs_default,
                    help=f"worker processes, integer >= 1 (default {jobs_default})")
    sp.add_argument("--dump-failures", metavar="DIR",
                    help="write violating configurations as JSON root lists into DIR")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("localize", help="disk holding a solution of P(z) = omega")
    sp.add_argument("--poly", required=True, help="JSON array of [re, im] coefficients, constant term first")
    sp.add_argument("--delta", type=_complex, required=True, help="re,im with P'(delta) != 0")
    sp.add_argument("--omega", type=_complex, default=0j, help="target value re,im (default 0)")
    common(sp)
    sp.set_defaults(func=cmd_localize)
    return parser


def run_cli(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "precision", 6) < 1:
            raise DomainError("precision must be >= 1")
        if getattr(args, "jobs", 1) < 1:
            raise DomainError("jobs must be >= 1")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InputError as exc:
        print(f"{exc.prefix}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConvergenceError, ThresholdOverflowError) as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SendovError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run_cli())
