"""Command line entry point: ``walshqt {verify,endpoint,conjecture,eval}``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import experiments
from .dyadic import StepFunction
from .phase_plane import Quartile
from .quartile_operator import apply, trilinear

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    pass


def _fraction_list(text: str) -> list[Fraction]:
    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of rationals, got {text!r}") from None


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="walshqt", description="Walsh quartile operator toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a seeded property suite")
    v.add_argument("--suite", required=True, help=f"one of {', '.join(experiments.SUITES)}, or all")
    v.add_argument("--seed", type=_seed, default=0)
    v.add_argument("--trials", type=_positive, default=None, help="trials per suite (default: per-suite)")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--out", default="-")

    e = sub.add_parser("endpoint", help="measure weak-type constants over an exponent sweep")
    e.add_argument("--p1", type=_fraction_list, default=list(experiments.DEFAULT_P1))
    e.add_argument("--depth", type=int, default=14)
    e.add_argument("--domain", type=int, default=2, help="quartiles live in [0, 2**domain)")
    e.add_argument("--band-width", type=int, default=12)
    e.add_argument("--seed", type=_seed, default=0)
    e.add_argument("--samples", type=_positive, default=None)
    e.add_argument("--family", choices=("power", "zero"), default="power")
    e.add_argument("--kind", choices=("weak", "signed", "both"), default="both")
    e.add_argument("--dilate-power4", type=int, default=0, help="rescale inputs by 4**e first")
    e.add_argument("--bound", type=float, default=8.0)
    e.add_argument("--out", default="-")

    c = sub.add_parser("conjecture", help="search for large symmetric-case ratios")
    c.add_argument("--trials", type=_positive, default=50)
    c.add_argument("--seed", type=_seed, default=0)
    c.add_argument("--cell-scale", type=int, default=-10)
    c.add_argument("--out", default="-")

    ev = sub.add_parser("eval", help="evaluate V_S(f1, f2), or the trilinear form when --f3 is given")
    ev.add_argument("--set", required=True, dest="set_path")
    ev.add_argument("--f1", required=True)
    ev.add_argument("--f2", required=True)
    ev.add_argument("--f3")
    ev.add_argument("--out", default="-")
    return ap


def _write(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_function(path: str) -> StepFunction:
    try:
        return StepFunction.from_json(_load_json(path))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def load_quartiles(path: str) -> list[Quartile]:
    obj = _load_json(path)
    if isinstance(obj, dict) and "quartiles" in obj:
        obj = obj["quartiles"]
    if not isinstance(obj, list):
        raise InputError(f"{path}: expected a list of quartiles")
    out = []
    for i, q in enumerate(obj):
        try:
            out.append(Quartile.from_json(q))
        except ValueError as exc:
            raise InputError(f"{path}: quartiles[{i}]: {exc}") from None
    return out


def cmd_verify(args) -> dict:
    if args.suite == "all":
        return experiments.run_all(args.seed, args.trials, args.jobs)
    if args.suite not in experiments.SUITES:
        raise InputError(f"unknown suite {args.suite!r}; choose from {', '.join(experiments.SUITES)} or all")
    return experiments.run_suite(args.suite, args.seed, args.trials, args.jobs)


def cmd_endpoint(args) -> dict:
    for p in args.p1:
        if not 1 < p < 2:
            raise InputError(f"p1 must lie in (1, 2), got {p}")
    if args.depth < 1 or args.domain - (-args.depth) > 20:
        raise InputError("grid too large: at most 2**20 cells")
    common = dict(depth=args.depth, m=args.domain, band_width=args.band_width, seed=args.seed, family=args.family, bound=args.bound)
    out = {"command": "endpoint", "version": experiments.__version__}
    if args.kind in ("weak", "both"):
        kw = dict(common, dilate=args.dilate_power4)
        if args.samples is not None:
            kw["samples"] = args.samples
        out["weak"] = experiments.endpoint_report(args.p1, **kw)
    if args.kind in ("signed", "both"):
        kw = dict(common)
        if args.samples is not None:
            kw["samples"] = max(1, args.samples)
        out["signed"] = experiments.signed_report(args.p1, **kw)
    out["pass"] = all(out[k]["pass"] for k in ("weak", "signed") if k in out)
    return out


def cmd_conjecture(args) -> dict:
    return experiments.conjecture_report(args.trials, args.seed, args.cell_scale)


def cmd_eval(args) -> dict:
    S = load_quartiles(args.set_path)
    f1, f2 = load_function(args.f1), load_function(args.f2)
    if args.f3 is None:
        return apply(S, f1, f2).to_json()
    value = trilinear(S, f1, f2, load_function(args.f3))
    return {
        "value": [str(value.a.numerator), str(value.a.denominator), str(value.b.numerator), str(value.b.denominator)],
        "approx": float(value),
    }


COMMANDS = {"verify": cmd_verify, "endpoint": cmd_endpoint, "conjecture": cmd_conjecture, "eval": cmd_eval}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        report = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"walshqt: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        _write(experiments.dumps(report), args.out)
    except OSError as exc:
        print(f"walshqt: error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    if args.command == "eval":
        return EXIT_OK
    return EXIT_OK if report.get("pass", True) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
