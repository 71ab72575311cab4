"""Command-line entry point.

Subcommands: run, sweep, validate, compare. Exit codes: 0 success, 1 config
error, 2 runtime failure (divergence, non-finite loss, failed validation),
3 peer-protocol error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .config import load_grid, load_run_spec
from .core import ConfigError, NonFiniteLossError
from .experiment import VALIDATION_KINDS, compare, format_comparison, run_experiment, sweep, validate
from .external import ProtocolError
from .optimizers import DivergenceError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2
EXIT_PROTOCOL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zosa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment (all seeds) from a config file")
    p_run.add_argument("--config", required=True, help="path to a run-spec JSON file")
    p_run.add_argument("--workers", type=int, default=1, help="concurrent seeds")

    p_sweep = sub.add_parser("sweep", help="grid sweep over a base config")
    p_sweep.add_argument("--config", required=True, help="path to the base run-spec JSON")
    p_sweep.add_argument("--grid", required=True, help="path to a grid JSON file")
    p_sweep.add_argument("--workers", type=int, default=1, help="concurrent sweep points")

    p_val = sub.add_parser("validate", help="check one estimator law at its pinned tolerance")
    p_val.add_argument("kind", choices=VALIDATION_KINDS)
    p_val.add_argument("--function", default=None)
    p_val.add_argument("--dimension", type=int, default=None)
    p_val.add_argument("--epsilon", type=float, default=None)
    p_val.add_argument("--num-directions", type=int, default=None, dest="num_directions")
    p_val.add_argument("--trials", type=int, default=None)
    p_val.add_argument("--seed", type=int, default=None)
    p_val.add_argument("--point", choices=("random", "ones", "zeros"), default=None)
    p_val.add_argument(
        "--sharpness-radius", type=float, default=None, dest="sharpness_radius"
    )
    p_val.add_argument("--out", default=None, help="write the report JSON here")

    p_cmp = sub.add_parser("compare", help="tabulate final gaps and query counts")
    p_cmp.add_argument("--traces", required=True, nargs="+", help="experiment directories")
    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    spec = load_run_spec(args.config)
    summary = run_experiment(spec, max_workers=args.workers)
    gap = summary["mean_final_gap"]
    print(f"wrote {len(spec.seeds)} trace(s) + summary.json under {spec.output_dir}")
    print(f"mean final gap: {'-' if gap is None else format(gap, '.6e')}")
    if summary["failures"]:
        for entry in summary["per_seed"]:
            if entry["failure"]:
                print(f"seed {entry['seed']} failed: {entry['failure']}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    base = load_run_spec(args.config)
    grid = load_grid(args.grid)
    result = sweep(base, grid, max_workers=args.workers)
    print(f"{result['points']} sweep point(s) under {base.output_dir}")
    best = result["leaderboard"][0]
    gap = best["mean_final_gap"]
    print(
        f"best: {best['point']} "
        f"(mean final gap {'-' if gap is None else format(gap, '.6e')})"
    )
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    overrides = {
        key: getattr(args, key)
        for key in (
            "function",
            "dimension",
            "epsilon",
            "num_directions",
            "trials",
            "seed",
            "point",
            "sharpness_radius",
        )
        if hasattr(args, key)
    }
    report = validate(args.kind, out_path=args.out, **overrides)
    print(json.dumps(report, indent=2, sort_keys=True))
    print(f"{args.kind}: {'PASS' if report['passed'] else 'FAIL'}")
    return EXIT_OK if report["passed"] else EXIT_RUNTIME


def _cmd_compare(args: argparse.Namespace) -> int:
    rows = compare(args.traces)
    print(format_comparison(rows))
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "sweep": _cmd_sweep,
        "validate": _cmd_validate,
        "compare": _cmd_compare,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ProtocolError as exc:
        print(f"peer protocol error: {exc}", file=sys.stderr)
        return EXIT_PROTOCOL
    except (DivergenceError, NonFiniteLossError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
