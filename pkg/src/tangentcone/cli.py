"""Command line front end.

Exit codes: 0 when every command passed with a determinate result, 2 when
some check found a violation, 3 when some result is indeterminate, 1 on
usage, parse or runtime errors.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .cone import ENGINES
from .parsing import ParseError
from .report import EXAMPLES, emit_json
from .script import RunConfig, run_script

__all__ = ["main", "exit_code"]


def _schedule(text: str) -> tuple:
    try:
        vals = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad eps schedule: {text!r}") from exc
    if not vals or any(v <= 0 for v in vals) or any(b >= a for a, b in zip(vals, vals[1:])):
        raise argparse.ArgumentTypeError("eps schedule must be positive and strictly decreasing")
    return vals


def _engines(text: str) -> tuple:
    vals = tuple(v.strip() for v in text.split(",") if v.strip())
    bad = [v for v in vals if v not in ENGINES]
    if bad or not vals:
        raise argparse.ArgumentTypeError(f"engines must be among {', '.join(ENGINES)}")
    return vals


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tangentcone", description="Tangent cones and induced cone strata of semialgebraic sets.")
    ap.add_argument("--script", metavar="FILE", help="problem script to run ('-' for stdin)")
    ap.add_argument("--repro", choices=EXAMPLES, help="run a worked example instead of a script")
    ap.add_argument("--json", metavar="OUT", help="write the JSON report to OUT ('-' for stdout)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--eps-schedule", type=_schedule, default=None, metavar="LIST")
    ap.add_argument("--budget", type=int, default=None, help="samples per eps for the numeric engines")
    ap.add_argument("--trunc", type=Fraction, default=None, metavar="ORDER", help="default Puiseux truncation order")
    ap.add_argument("--strict", action="store_true", help="stop at the first command that does not pass")
    ap.add_argument("--engines", type=_engines, default=None, metavar="LIST")
    ap.add_argument("--grid", type=int, default=16, metavar="N")
    ap.add_argument("--timing", action="store_true", help="record wall time per command")
    return ap


def exit_code(report: dict) -> int:
    statuses = [c["status"] for c in report.get("commands", [])]
    if "violation" in statuses:
        return 2
    if "error" in statuses:
        return 1
    if "indeterminate" in statuses:
        return 3
    return 0


def _summary(report: dict) -> str:
    lines = []
    for c in report["commands"]:
        lines.append(f"[{c['status']}] {c['statement']}")
        if c["status"] == "error":
            lines.append(f"    {c['result']['error']}")
    return "\n".join(lines)


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    if args.grid < 1:
        ap.error("--grid must be at least 1")
    cfg = RunConfig(seed=args.seed, grid=args.grid, strict=args.strict, timing=args.timing, trunc=args.trunc)
    if args.eps_schedule is not None:
        cfg.schedule = args.eps_schedule
    if args.budget is not None:
        cfg.budget = args.budget
    if args.engines is not None:
        cfg.engines = args.engines
    if args.repro:
        text = f"repro-example {args.repro};"
    elif args.script:
        try:
            text = sys.stdin.read() if args.script == "-" else open(args.script).read()
        except OSError as exc:
            print(f"error: cannot read script {args.script}: {exc}", file=sys.stderr)
            return 1
    else:
        ap.print_usage(sys.stderr)
        print("error: give --script FILE or --repro NAME", file=sys.stderr)
        return 1
    try:
        report = run_script(text, cfg)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.json == "-":
        sys.stdout.write(emit_json(report))
    else:
        if args.json:
            try:
                emit_json(report, args.json)
            except OSError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 1
        print(_summary(report))
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
