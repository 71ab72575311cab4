"""Experiment orchestration: multi-seed runs, grid sweeps, estimator-law
validation with pass/fail verdicts, and cross-run comparison tables."""

from __future__ import annotations

import dataclasses
import itertools
import json
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from .benchmarks import SyntheticFunction
from .config import RunSpec, open_objective, spec_to_dict
from .core import ConfigError, Objective
from .diagnostics import (
    gradient_alignment_study,
    linear_objective,
    mse_law_study,
    sam_alignment_study,
    sigma_law_study,
)
from .estimators import EstimatorConfig
from .optimizers import run
from .tracefile import (
    ensure_dir,
    read_summary,
    subsample_rows,
    trace_filename,
    write_summary,
    write_trace,
)

__all__ = [
    "VALIDATION_KINDS",
    "compare",
    "format_comparison",
    "run_experiment",
    "sweep",
    "validate",
]


def _single_seed(spec: RunSpec, seed: int) -> dict:
    with open_objective(spec.objective) as objective:
        result = run(
            spec.optimizer_kind,
            objective,
            spec.optimizer,
            spec.iterations,
            seed,
            query_budget=spec.query_budget,
            record_alignment=spec.record_alignment,
        )
    rows = subsample_rows(result.rows, spec.iterations)
    header = spec_to_dict(spec)
    header["seed"] = seed
    write_trace(os.path.join(spec.output_dir, trace_filename(seed)), rows, header)
    last = result.rows[-1] if result.rows else None
    return {
        "seed": seed,
        "final_loss": last.loss if last else None,
        "final_gap": last.gap if last else None,
        "iterations_run": len(result.rows),
        "total_queries": result.queries,
        "diagnostic_queries": result.diagnostic_queries,
        "failure": result.failure,
    }


def run_experiment(spec: RunSpec, *, max_workers: int = 1) -> dict:
    """Run every seed, write one trace file per seed plus a summary.

    Seeds are independent (each derives its own random streams), so they can
    run concurrently; the summary is assembled in seed order after all joins
    and aggregates only the seeds that finished cleanly. Deterministic per
    seed apart from wall-clock columns.
    """
    ensure_dir(spec.output_dir)
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            per_seed = list(pool.map(lambda s: _single_seed(spec, s), spec.seeds))
    else:
        per_seed = [_single_seed(spec, seed) for seed in spec.seeds]
    gaps = [e["final_gap"] for e in per_seed if e["failure"] is None and e["final_gap"] is not None]
    summary = {
        "config": spec_to_dict(spec),
        "per_seed": per_seed,
        "mean_final_gap": float(np.mean(gaps)) if gaps else None,
        "std_final_gap": float(np.std(gaps)) if gaps else None,
        "median_final_gap": float(np.median(gaps)) if gaps else None,
        "failures": sum(1 for e in per_seed if e["failure"] is not None),
    }
    write_summary(os.path.join(spec.output_dir, "summary.json"), summary)
    return summary


def _apply_overrides(spec: RunSpec, assignment: dict) -> RunSpec:
    estimator_fields = {"epsilon", "num_directions"}
    optimizer_fields = {"learning_rate", "sharpness_radius", "beta1", "beta2"}
    estimator = spec.optimizer.estimator
    est_updates = {k: v for k, v in assignment.items() if k in estimator_fields}
    if est_updates:
        estimator = dataclasses.replace(estimator, **est_updates)
    opt_updates = {k: v for k, v in assignment.items() if k in optimizer_fields}
    optimizer = dataclasses.replace(spec.optimizer, estimator=estimator, **opt_updates)
    iterations = int(assignment.get("iterations", spec.iterations))
    return dataclasses.replace(spec, optimizer=optimizer, iterations=iterations)


def _point_name(index: int, assignment: dict) -> str:
    parts = [f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}" for k, v in sorted(assignment.items())]
    return f"p{index:03d}__" + "_".join(parts)


def sweep(base: RunSpec, grid: dict[str, list], *, max_workers: int = 1) -> dict:
    """Cartesian product of the grid, each point run as a full experiment.

    The leaderboard ranks points by mean final gap (failed points sink to the
    bottom). Points are independent and may run concurrently; results are
    identical to a serial sweep.
    """
    if not grid:
        raise ConfigError("sweep grid must be non-empty")
    keys = sorted(grid)
    assignments = [dict(zip(keys, values)) for values in itertools.product(*(grid[k] for k in keys))]
    ensure_dir(base.output_dir)

    def one_point(item: tuple[int, dict]) -> dict:
        index, assignment = item
        name = _point_name(index, assignment)
        point_spec = _apply_overrides(base, assignment)
        point_spec = dataclasses.replace(
            point_spec, output_dir=os.path.join(base.output_dir, name)
        )
        summary = run_experiment(point_spec)
        return {
            "point": name,
            "params": assignment,
            "output_dir": point_spec.output_dir,
            "mean_final_gap": summary["mean_final_gap"],
            "std_final_gap": summary["std_final_gap"],
            "failures": summary["failures"],
        }

    items = list(enumerate(assignments))
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            entries = list(pool.map(one_point, items))
    else:
        entries = [one_point(item) for item in items]

    def rank_key(entry: dict) -> float:
        gap = entry["mean_final_gap"]
        return float("inf") if gap is None else gap

    leaderboard = sorted(entries, key=rank_key)
    out = {"points": len(entries), "leaderboard": leaderboard}
    write_summary(os.path.join(base.output_dir, "leaderboard.json"), out)
    return out


def compare(trace_dirs: list[str]) -> list[dict]:
    """Tabulate final gaps and query counts across experiment directories."""
    rows = []
    for path in trace_dirs:
        summary = read_summary(os.path.join(path, "summary.json"))
        config = summary["config"]
        rows.append(
            {
                "path": path,
                "optimizer": config["optimizer"]["kind"],
                "objective": f'{config["objective"]["kind"]}(d={config["objective"]["dimension"]})',
                "mean_final_gap": summary["mean_final_gap"],
                "std_final_gap": summary["std_final_gap"],
                "queries_per_seed": max(
                    (e["total_queries"] for e in summary["per_seed"]), default=0
                ),
                "failures": summary["failures"],
            }
        )
    rows.sort(key=lambda r: float("inf") if r["mean_final_gap"] is None else r["mean_final_gap"])
    return rows


def format_comparison(rows: list[dict]) -> str:
    headers = ("optimizer", "objective", "mean_final_gap", "std_final_gap", "queries_per_seed", "failures")
    table = [headers]
    for row in rows:
        table.append(
            (
                row["optimizer"],
                row["objective"],
                "-" if row["mean_final_gap"] is None else f"{row['mean_final_gap']:.6e}",
                "-" if row["std_final_gap"] is None else f"{row['std_final_gap']:.3e}",
                str(row["queries_per_seed"]),
                str(row["failures"]),
            )
        )
    widths = [max(len(r[i]) for r in table) for i in range(len(headers))]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)) for row in table]
    return "\n".join(lines)


# Law-validation presets. Tolerances are sized from the CLT spread at the
# default trial counts with generous headroom, and are pinned here rather
# than left to callers.
VALIDATION_KINDS = ("sigma_law", "mse_law", "alignment", "sam_alignment")

_VALIDATE_DEFAULTS = {
    "sigma_law": {
        "function": "quadratic",
        "dimension": 10,
        "epsilon": 1e-3,
        "num_directions": 32,
        "trials": 10_000,
        "seed": 20240801,
        "point": "ones",
        "tolerance": 0.02,
    },
    "mse_law": {
        "function": "linear",
        "dimension": 20,
        "epsilon": 1e-3,
        "num_directions": 5,
        "trials": 10_000,
        "seed": 20240802,
        "point": "zeros",
        "tolerance": 0.05,
    },
    "alignment": {
        "function": "quadratic",
        "dimension": 100,
        "epsilon": 1e-3,
        "num_directions": 1000,
        "trials": 100,
        "seed": 20240803,
        "tolerance": 0.05,
    },
    "sam_alignment": {
        "function": "quadratic",
        "dimension": 100,
        "epsilon": 1e-3,
        "num_directions": 1000,
        "trials": 50,
        "seed": 20240804,
        "sharpness_radius": 1e-5,
        "min_cos": 0.9,
        "ratio_range": (0.8, 1.25),
    },
}


def _objective_for(function: str, dimension: int) -> Objective:
    if function == "linear":
        return linear_objective(np.ones(dimension))
    return SyntheticFunction(kind=function, dimension=dimension).as_objective()


def _study_theta(point: Optional[str], dimension: int):
    if point in (None, "random"):
        return None
    if point == "ones":
        return np.ones(dimension)
    if point == "zeros":
        return np.zeros(dimension)
    raise ConfigError(f"point must be one of random/ones/zeros, got {point!r}")


def validate(kind: str, out_path: Optional[str] = None, **overrides) -> dict:
    """Run one statistical-law study and report pass/fail at its pinned
    tolerance. Returns the report dict; optionally writes it as JSON."""
    if kind not in VALIDATION_KINDS:
        raise ConfigError(f"kind must be one of {VALIDATION_KINDS}, got {kind!r}")
    params = dict(_VALIDATE_DEFAULTS[kind])
    for key, value in overrides.items():
        if value is None:
            continue
        if key not in params:
            raise ConfigError(f"unknown parameter {key!r} for {kind} validation")
        params[key] = value

    objective = _objective_for(params["function"], int(params["dimension"]))
    config = EstimatorConfig(
        epsilon=float(params["epsilon"]), num_directions=int(params["num_directions"])
    )
    trials = int(params["trials"])
    seed = int(params["seed"])

    report: dict = {"kind": kind, "params": {k: v for k, v in params.items()}}
    if kind in ("sigma_law", "mse_law"):
        study = sigma_law_study if kind == "sigma_law" else mse_law_study
        theta = _study_theta(params.get("point"), int(params["dimension"]))
        law = study(objective, config, trials, seed, theta=theta)
        report.update(
            empirical=law.empirical,
            predicted=law.predicted,
            relative_error=law.relative_error,
            trials=law.trials,
            passed=bool(law.relative_error <= float(params["tolerance"])),
        )
    elif kind == "alignment":
        alignment = gradient_alignment_study(objective, config, trials, seed)
        deviation = abs(alignment.base.mean_cos - alignment.predicted_cos)
        report.update(
            base_mean_cos=alignment.base.mean_cos,
            base_max_cos=alignment.base.max_cos,
            perturbed_mean_cos=alignment.perturbed.mean_cos,
            perturbed_max_cos=alignment.perturbed.max_cos,
            predicted_cos=alignment.predicted_cos,
            deviation=deviation,
            trials=trials,
            passed=bool(deviation <= float(params["tolerance"])),
        )
    else:  # sam_alignment
        sam = sam_alignment_study(
            objective,
            config,
            float(params["sharpness_radius"]),
            trials,
            seed,
        )
        low, high = params["ratio_range"]
        report.update(
            mean_cos=sam.mean_cos,
            max_cos=sam.max_cos,
            mean_radius_ratio=sam.mean_radius_ratio,
            predicted_cos=sam.predicted_cos,
            trials=trials,
            passed=bool(
                sam.mean_cos >= float(params["min_cos"])
                and low <= sam.mean_radius_ratio <= high
            ),
        )
    # JSON-friendly params (tuples -> lists)
    report["params"] = {
        k: list(v) if isinstance(v, tuple) else v for k, v in report["params"].items()
    }
    if out_path:
        directory = os.path.dirname(out_path)
        if directory:
            ensure_dir(directory)
        with open(out_path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return report
