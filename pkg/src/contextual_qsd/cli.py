"""Command-line front end: ``qsd bound|region|sweep|povm|verify``."""

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from .acceptance import run_all
from .enhancement import (
    gap,
    linspace_range,
    mixed_non_enhancement_interval,
    mixed_sweep,
    non_enhancement_interval,
    sweep,
)
from .errors import DomainError, UnsupportedConfigurationError
from .quantum import povm_oracle, quantum_success_closed
from .qubit import DiscriminationInstance, NoisyInstance, validate_povm

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_DOMAIN = 2
EXIT_IO = 3

CSV_HEADER = ("q1", "c", "eps", "Q", "quantum", "nc_bound", "gap", "enhanced")
OUT_DIR_ENV = "QSD_OUT_DIR"


def fmt(x):
    """Nine significant digits, locale independent; ``None`` becomes empty."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    return f"{float(x):.9g}"


def parse_range(text, flag):
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(flag, f"{flag} must have the form lo:hi:count")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise DomainError(flag, f"{flag} must have the form lo:hi:count") from None
    return linspace_range(lo, hi, count, flag)


def _instance(args):
    inst = DiscriminationInstance(args.q1, args.c)
    if args.eps is None:
        return inst
    noisy = NoisyInstance(inst, args.eps)
    noisy.require_equal_priors()
    return noisy


def _resolve_out(path):
    if path is None:
        return None
    base = os.environ.get(OUT_DIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _emit(text, out):
    path = _resolve_out(out)
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(obj):
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def cmd_bound(args):
    inst = _instance(args)
    p = gap(inst, args.Q)
    record = {
        "q1": args.q1,
        "c": args.c,
        "eps": args.eps,
        "Q": p.Q,
        "quantum": p.quantum,
        "nc_bound": p.nc_bound,
        "gap": p.gap,
        "enhanced": bool(p.enhanced),
        "quantum_regime": p.quantum_regime,
        "nc_regime": p.nc_regime,
    }
    if args.format == "json":
        text = _json_text(record)
    else:
        text = _csv_text(CSV_HEADER, [[fmt(record[k]) for k in CSV_HEADER]])
    _emit(text, args.out)
    return EXIT_OK


def cmd_region(args):
    inst = _instance(args)
    if isinstance(inst, NoisyInstance):
        rep = mixed_non_enhancement_interval(inst, args.tol, args.grid_step)
    else:
        rep = non_enhancement_interval(inst, args.tol, args.grid_step)
    digits = max(1, math.ceil(-math.log10(args.tol)))

    def r(x):
        return None if x is None else round(float(x), digits)

    if args.format == "json":
        text = _json_text(
            {
                "q1": args.q1,
                "c": args.c,
                "eps": args.eps,
                "intervals": [{"q_lo": r(lo), "q_hi": r(hi)} for lo, hi in rep.intervals],
                "length": r(rep.length),
                "analytic_upper_hint": r(rep.analytic_upper_hint),
            }
        )
    elif args.format == "text":
        spans = ", ".join(f"[{lo:.{digits}f}, {hi:.{digits}f}]" for lo, hi in rep.intervals)
        hint = "" if rep.analytic_upper_hint is None else f"{rep.analytic_upper_hint:.{digits}f}"
        text = f"{spans or '[]'}\nanalytic_upper_hint {hint}\n"
    else:
        hint = "" if rep.analytic_upper_hint is None else f"{rep.analytic_upper_hint:.{digits}f}"
        rows = [
            [fmt(args.q1), fmt(args.c), fmt(args.eps), f"{lo:.{digits}f}", f"{hi:.{digits}f}", hint]
            for lo, hi in rep.intervals
        ]
        text = _csv_text(("q1", "c", "eps", "q_lo", "q_hi", "analytic_upper_hint"), rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_sweep(args):
    Q_values = parse_range(args.Q_range, "--Q-range")
    if args.eps_range is not None:
        if args.q1_range is not None:
            raise DomainError("--q1-range", "--q1-range and --eps-range are mutually exclusive")
        eps_values = parse_range(args.eps_range, "--eps-range")
        rows, reports = mixed_sweep(args.c, eps_values, Q_values, tol=args.tol)
        for eps, rep in reports.items():
            print(f"eps={fmt(eps)} non-enhancement length={fmt(rep.length)}", file=sys.stderr)
    else:
        q1_values = parse_range(args.q1_range or "0.5:0.5:1", "--q1-range")
        rows = sweep(q1_values, Q_values, args.c)
    fields = [[getattr(row, k) for k in CSV_HEADER] for row in rows]
    if args.format == "json":
        text = _json_text([dict(zip(CSV_HEADER, f)) for f in fields])
    else:
        text = _csv_text(CSV_HEADER, [[fmt(v) for v in f] for f in fields])
    _emit(text, args.out)
    return EXIT_OK


def _matrix(op):
    m = op.entries
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def cmd_povm(args):
    base = DiscriminationInstance(args.q1, args.c)
    pair = base.states()
    if args.eps is None:
        states = (pair.rho1, pair.rho2)
    else:
        states = NoisyInstance(base, args.eps).density_operators()
    res = povm_oracle(states, base.q1, args.Q)
    diag = validate_povm(res.povm)
    m0 = res.povm.m0
    record = {
        "q1": args.q1,
        "c": args.c,
        "eps": args.eps,
        "Q": args.Q,
        "success": res.success,
        "achieved_q": res.achieved_q,
        "error": res.error,
        "balance": m0.expect(pair.ket1) - m0.expect(pair.ket2),
        "m0": _matrix(res.povm.m0),
        "m1": _matrix(res.povm.m1),
        "m2": _matrix(res.povm.m2),
        "diagnostics": {
            "min_eigenvalues": list(diag.min_eigenvalues),
            "completeness_residual": diag.completeness_residual,
            "passed": diag.passed,
        },
        "iterations": res.iterations,
    }
    if args.eps is None:
        record["closed_form"] = quantum_success_closed(base, args.Q).success
    _emit(_json_text(record), args.out)
    return EXIT_OK


def cmd_verify(args):
    results = run_all(fast=args.fast, echo=print)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY_FAILED


def _positive(name):
    def parse(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number") from None
        if not (0.0 < value <= 0.1):
            raise argparse.ArgumentTypeError(f"{name} must lie in (0, 0.1]")
        return value

    return parse


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qsd",
        description="Quantum vs noncontextual state discrimination with fixed failure probability.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, need_q, formats=("csv", "json")):
        p.add_argument("--q1", type=float, default=0.5, help="prior of the first state (default 0.5)")
        p.add_argument("--c", type=float, required=True, help="confusability |<psi1|psi2>|^2")
        p.add_argument("--eps", type=float, default=None, help="depolarizing visibility; omit for pure states")
        if need_q:
            p.add_argument("--Q", type=float, required=True, help="fixed failure probability")
        p.add_argument("--out", default=None, help=f"output file (relative paths resolve under ${OUT_DIR_ENV})")
        if formats:
            p.add_argument("--format", choices=formats, default="csv")

    p = sub.add_parser("bound", help="quantum optimum, noncontextual bound and gap at one point")
    common(p, need_q=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("region", help="failure-probability intervals without contextual enhancement")
    common(p, need_q=False, formats=("csv", "json", "text"))
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--grid-step", type=_positive("--grid-step"), default=1e-3)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("sweep", help="gap table over q1 (pure) or eps (noisy) and Q")
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--q1-range", default=None, help="lo:hi:count (pure sweep)")
    p.add_argument("--eps-range", default=None, help="lo:hi:count (noisy sweep, q1 = 0.5)")
    p.add_argument("--Q-range", required=True, help="lo:hi:count")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("povm", help="optimal three-outcome measurement from the search oracle (JSON)")
    common(p, need_q=True, formats=())
    p.set_defaults(func=cmd_povm)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--fast", action="store_true", help="skip the oracle-heavy noisy-state checks")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, UnsupportedConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
