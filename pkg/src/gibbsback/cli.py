"""Command line front end.

Subcommands: ``stirling`` (dump a triangle), ``law`` (pmf tables for the
species count, subset totals, or conditional multiplicities), ``moments``
(re-observation moment reports), and ``verify`` (oracle-vs-closed-form
grid).  Exit codes: 0 success, 1 usage or input error, 2 verification
failure.

Exact values are serialized as fraction strings like ``3/4`` unless
``--decimal-digits`` asks for decimal rendering.  The default numeric mode
can be set with the ``GIBBSBACK_MODE`` environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .estimators import BackwardQuery, backward_report
from .laws import block_count_pmf, conditional_multiplicity_pmf, subset_sum_pmf
from .numerics import EXACT, LOG, make_scalar, parse_rational, to_float
from .oracle import _compositions
from .priors import SampleSummary, dirichlet, load_table_csv, pitman_yor
from .stirling import build_triangle
from .verify import run_verification

__all__ = ["main"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise UsageError(message)


def _render(value, mode, decimal_digits):
    if decimal_digits is not None:
        return f"{to_float(value):.{decimal_digits}g}"
    if mode == EXACT:
        return str(Fraction(value))
    return repr(to_float(value))


def _add_common(parser):
    parser.add_argument(
        "--mode",
        choices=[EXACT, LOG],
        default=os.environ.get("GIBBSBACK_MODE", EXACT),
        help="numeric backend (default from GIBBSBACK_MODE, else exact)",
    )
    parser.add_argument(
        "--format",
        "--output",
        dest="format",
        choices=["json", "csv"],
        default="json",
        help="serialization format",
    )
    parser.add_argument(
        "--decimal-digits",
        type=int,
        default=None,
        metavar="D",
        help="render values as decimals with D significant digits",
    )
    parser.add_argument("-o", "--out", default=None, help="output path (default stdout)")


def _add_prior_flags(parser):
    parser.add_argument("--prior", choices=["py", "dirichlet", "table"], required=True)
    parser.add_argument("--alpha", default=None, help="discount, e.g. 1/2 or 0.5")
    parser.add_argument("--theta", default=None, help="strength parameter")
    parser.add_argument("--file", default=None, help="weight table CSV for --prior table")


def _build_prior(args):
    mode = args.mode
    if args.prior == "py":
        if args.alpha is None or args.theta is None:
            raise UsageError("--prior py needs --alpha and --theta")
        return pitman_yor(parse_rational(args.alpha), parse_rational(args.theta), mode)
    if args.prior == "dirichlet":
        if args.theta is None:
            raise UsageError("--prior dirichlet needs --theta")
        return dirichlet(parse_rational(args.theta), mode)
    if args.file is None or args.alpha is None:
        raise UsageError("--prior table needs --alpha and --file")
    return load_table_csv(args.file, parse_rational(args.alpha), mode)


def _emit(text, args):
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)


def _json_dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _csv_lines(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(str(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# subcommands


def _cmd_stirling(args):
    alpha = make_scalar(parse_rational(args.alpha), args.mode)
    gamma = make_scalar(parse_rational(args.gamma), args.mode)
    tri = build_triangle(alpha, gamma, args.n_max)
    rows = [
        (n, k, _render(tri.value(n, k), args.mode, args.decimal_digits))
        for n in range(args.n_max + 1)
        for k in range(n + 1)
    ]
    if args.format == "csv":
        _emit(_csv_lines(("n", "k", "value"), rows), args)
    else:
        payload = {
            "alpha": args.alpha,
            "gamma": args.gamma,
            "mode": args.mode,
            "entries": [{"n": n, "k": k, "value": v} for n, k, v in rows],
        }
        _emit(_json_dumps(payload), args)
    return 0


def _cmd_law(args):
    prior = _build_prior(args)
    digits = args.decimal_digits
    if args.law == "blocks":
        rows = [
            (j, _render(block_count_pmf(prior, args.n, j), args.mode, digits))
            for j in range(1, args.n + 1)
        ]
        header = ("j", "probability")
        label = "species-count"
    elif args.law == "subset-sum":
        if args.j is None or args.r is None:
            raise UsageError("--law subset-sum needs --j and --r")
        rows = [
            (
                s,
                _render(
                    subset_sum_pmf(prior.alpha, args.n, args.j, args.r, s),
                    args.mode,
                    digits,
                ),
            )
            for s in range(args.r, args.n - (args.j - args.r) + 1)
        ]
        header = ("s", "probability")
        label = "subset-sum"
    else:  # cond-mult
        if args.j is None or args.r is None:
            raise UsageError("--law cond-mult needs --j and --r")
        rows = []
        for total in range(args.r, args.n - (args.j - args.r) + 1):
            for values in _compositions(total, args.r):
                p = conditional_multiplicity_pmf(prior.alpha, args.n, args.j, values)
                rows.append(
                    ("|".join(str(v) for v in values), _render(p, args.mode, digits))
                )
        header = ("sizes", "probability")
        label = "conditional-multiplicities"
    if args.format == "csv":
        _emit(_csv_lines(header, rows), args)
    else:
        payload = {
            "law": label,
            "mode": args.mode,
            "n": args.n,
            "j": args.j,
            "r": args.r,
            "prior": prior.describe(),
            "table": [{header[0]: a, header[1]: b} for a, b in rows],
        }
        _emit(_json_dumps(payload), args)
    return 0


def _cmd_moments(args):
    prior = _build_prior(args)
    mults = None
    if args.multiplicities:
        mults = tuple(int(v) for v in args.multiplicities.split(","))
        n = sum(mults)
        j = len(mults)
        if args.n is not None and args.n != n:
            raise UsageError(f"--n {args.n} conflicts with multiplicities summing to {n}")
        if args.j is not None and args.j != j:
            raise UsageError(f"--j {args.j} conflicts with {j} multiplicities")
    else:
        if args.n is None or args.j is None:
            raise UsageError("incomplete information needs --n and --j")
        n, j = args.n, args.j
    data = SampleSummary(n, j, mults)
    query = BackwardQuery(
        prior=prior,
        data=data,
        m=args.m,
        r_max=args.r_max,
        l=args.l,
        target=args.target,
    )
    report = backward_report(query)
    digits = args.decimal_digits
    moments = [_render(v, args.mode, digits) for v in report.moments]
    pmf = None if report.pmf is None else [_render(v, args.mode, digits) for v in report.pmf]
    if args.format == "csv":
        rows = [("moment", r, v) for r, v in enumerate(moments)]
        if pmf is not None:
            rows.extend(("pmf", x, v) for x, v in enumerate(pmf))
        _emit(_csv_lines(("quantity", "order", "value"), rows), args)
    else:
        payload = {
            "query": {
                "prior": report.prior,
                "n": report.n,
                "j": report.j,
                "m": report.m,
                "l": report.l,
                "r_max": report.r_max,
                "target": report.target,
                "info": report.info,
                "multiplicities": list(mults) if mults else None,
            },
            "moments": moments,
            "pmf": pmf,
            "mode": report.mode,
            "conventions": report.conventions,
        }
        _emit(_json_dumps(payload), args)
    return 0


def _cmd_verify(args):
    lines = []
    checks = run_verification(
        grid=args.grid, seed=args.seed, mc_count=args.mc_count, out=lines.append
    )
    _emit("\n".join(lines) + "\n", args)
    return 0 if all(c.ok for c in checks) else 2


def build_parser() -> _Parser:
    parser = _Parser(prog="gibbsback", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stirling", help="dump a generalized Stirling triangle")
    p.add_argument("--alpha", required=True)
    p.add_argument("--gamma", default="0")
    p.add_argument("--n-max", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_stirling)

    p = sub.add_parser("law", help="pmf tables for partition laws")
    p.add_argument(
        "--law", choices=["blocks", "subset-sum", "cond-mult"], required=True
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    _add_prior_flags(p)
    _add_common(p)
    p.set_defaults(func=_cmd_law)

    p = sub.add_parser("moments", help="re-observation moment report")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--j", type=int, default=None)
    p.add_argument(
        "--multiplicities",
        default=None,
        help="comma separated initial multiplicities; presence switches to "
        "complete information",
    )
    p.add_argument("--m", type=int, required=True, help="future sample size")
    p.add_argument("--l", type=int, default=0, help="re-observation count for rl")
    p.add_argument("--r-max", type=int, required=True)
    p.add_argument(
        "--target",
        choices=["rl", "rm"],
        default="rl",
        help="rl: species seen exactly l more times; rm: at least once",
    )
    _add_prior_flags(p)
    _add_common(p)
    p.set_defaults(func=_cmd_moments)

    p = sub.add_parser("verify", help="run the oracle-vs-closed-form grid")
    p.add_argument("--grid", choices=["small", "full"], default="small")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mc-count", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, TypeError, OSError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
