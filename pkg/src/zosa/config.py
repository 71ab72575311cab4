"""Run specifications and their JSON document form.

The config format is strict: unknown keys anywhere in the document are
errors, so a typo in a sweep grid cannot silently fall back to a default.
"""

from __future__ import annotations

import contextlib
import json
from dataclasses import dataclass
from typing import Iterator, Optional

from .benchmarks import FUNCTION_KINDS, SyntheticFunction
from .core import ConfigError, Objective
from .estimators import EstimatorConfig
from .optimizers import OPTIMIZER_KINDS, OptimizerConfig

__all__ = [
    "ObjectiveSpec",
    "RunSpec",
    "load_grid",
    "load_run_spec",
    "open_objective",
    "parse_grid",
    "parse_run_spec",
    "spec_to_dict",
]

# Desk-scale defaults; a full multi-optimizer suite at these sizes runs in
# seconds, not hours.
DEFAULT_DIMENSION = 100
DEFAULT_ITERATIONS = 2000
DEFAULT_SEEDS = (1, 2, 3)
DEFAULT_NUM_DIRECTIONS = 32
DEFAULT_EPSILON = 1e-3
DEFAULT_SHARPNESS_RADIUS = 1e-5
DEFAULT_LEARNING_RATE = 1e-2
DEFAULT_TIMEOUT_S = 30.0

_OBJECTIVE_KINDS = FUNCTION_KINDS + ("external",)

SWEEPABLE_FIELDS = (
    "learning_rate",
    "sharpness_radius",
    "epsilon",
    "num_directions",
    "beta1",
    "beta2",
    "iterations",
)


@dataclass(frozen=True)
class ObjectiveSpec:
    """Where the loss comes from: a builtin benchmark or an external peer."""

    kind: str
    dimension: int
    command: Optional[tuple[str, ...]] = None
    tcp: Optional[str] = None
    timeout_s: float = DEFAULT_TIMEOUT_S
    optimum_value: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind not in _OBJECTIVE_KINDS:
            raise ConfigError(
                f"objective.kind must be one of {_OBJECTIVE_KINDS}, got {self.kind!r}"
            )
        if self.dimension < 1:
            raise ConfigError(f"objective.dimension must be >= 1, got {self.dimension}")
        if self.kind == "external":
            if (self.command is None) == (self.tcp is None):
                raise ConfigError(
                    "external objective needs exactly one of 'command' or 'tcp'"
                )
        elif self.command is not None or self.tcp is not None:
            raise ConfigError("'command'/'tcp' are only valid for kind 'external'")


@dataclass(frozen=True)
class RunSpec:
    """Everything one experiment needs: optimizer, objective, budget, seeds."""

    optimizer_kind: str
    optimizer: OptimizerConfig
    objective: ObjectiveSpec
    iterations: int
    seeds: tuple[int, ...]
    output_dir: str
    query_budget: Optional[int] = None
    record_alignment: bool = False

    def __post_init__(self) -> None:
        if self.optimizer_kind not in OPTIMIZER_KINDS:
            raise ConfigError(
                f"optimizer.kind must be one of {OPTIMIZER_KINDS}, got {self.optimizer_kind!r}"
            )
        if self.iterations < 1:
            raise ConfigError(f"iterations must be >= 1, got {self.iterations}")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if self.query_budget is not None and self.query_budget < 1:
            raise ConfigError(f"query_budget must be >= 1, got {self.query_budget}")
        if not self.output_dir:
            raise ConfigError("output_dir must be a non-empty path")


def _take(doc: dict, section: str, known: dict) -> dict:
    """Pop known keys with defaults; reject anything left over."""
    out = {}
    doc = dict(doc)
    for key, default in known.items():
        out[key] = doc.pop(key, default)
    if doc:
        unknown = ", ".join(sorted(doc))
        raise ConfigError(f"unknown key(s) in {section}: {unknown}")
    return out


_REQUIRED = object()


def _required(section: str, values: dict) -> None:
    for key, value in values.items():
        if value is _REQUIRED:
            raise ConfigError(f"missing required field {section}.{key}")


def parse_run_spec(doc: dict) -> RunSpec:
    if not isinstance(doc, dict):
        raise ConfigError("run spec must be a JSON object")
    top = _take(
        doc,
        "run spec",
        {
            "optimizer": _REQUIRED,
            "objective": _REQUIRED,
            "iterations": DEFAULT_ITERATIONS,
            "seeds": list(DEFAULT_SEEDS),
            "output_dir": _REQUIRED,
            "query_budget": None,
            "record_alignment": False,
        },
    )
    _required("", {k: top[k] for k in ("optimizer", "objective", "output_dir")})

    opt = _take(
        dict(top["optimizer"]),
        "optimizer",
        {
            "kind": _REQUIRED,
            "learning_rate": DEFAULT_LEARNING_RATE,
            "sharpness_radius": None,
            "epsilon": DEFAULT_EPSILON,
            "num_directions": DEFAULT_NUM_DIRECTIONS,
            "direction_kind": "rademacher",
            "beta1": 0.9,
            "beta2": 0.999,
            "moment_epsilon": 1e-8,
            "sigma_floor": 1e-12,
        },
    )
    _required("optimizer", {"kind": opt["kind"]})
    if opt["sharpness_radius"] is None:
        opt["sharpness_radius"] = (
            DEFAULT_SHARPNESS_RADIUS if opt["kind"] == "zosa" else 0.0
        )
    estimator = EstimatorConfig(
        epsilon=float(opt["epsilon"]),
        num_directions=int(opt["num_directions"]),
        direction_kind=str(opt["direction_kind"]),
    )
    optimizer = OptimizerConfig(
        learning_rate=float(opt["learning_rate"]),
        estimator=estimator,
        sharpness_radius=float(opt["sharpness_radius"]),
        beta1=float(opt["beta1"]),
        beta2=float(opt["beta2"]),
        moment_epsilon=float(opt["moment_epsilon"]),
        sigma_floor=float(opt["sigma_floor"]),
    )

    obj = _take(
        dict(top["objective"]),
        "objective",
        {
            "kind": _REQUIRED,
            "dimension": DEFAULT_DIMENSION,
            "command": None,
            "tcp": None,
            "timeout_s": DEFAULT_TIMEOUT_S,
            "optimum_value": None,
        },
    )
    _required("objective", {"kind": obj["kind"]})
    objective = ObjectiveSpec(
        kind=str(obj["kind"]),
        dimension=int(obj["dimension"]),
        command=tuple(obj["command"]) if obj["command"] is not None else None,
        tcp=str(obj["tcp"]) if obj["tcp"] is not None else None,
        timeout_s=float(obj["timeout_s"]),
        optimum_value=(
            float(obj["optimum_value"]) if obj["optimum_value"] is not None else None
        ),
    )

    seeds = top["seeds"]
    if not isinstance(seeds, (list, tuple)) or not seeds:
        raise ConfigError("seeds must be a non-empty list of integers")
    return RunSpec(
        optimizer_kind=str(opt["kind"]),
        optimizer=optimizer,
        objective=objective,
        iterations=int(top["iterations"]),
        seeds=tuple(int(s) for s in seeds),
        output_dir=str(top["output_dir"]),
        query_budget=(
            int(top["query_budget"]) if top["query_budget"] is not None else None
        ),
        record_alignment=bool(top["record_alignment"]),
    )


def load_run_spec(path: str) -> RunSpec:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path} is not valid JSON: {exc}") from None
    return parse_run_spec(doc)


def spec_to_dict(spec: RunSpec) -> dict:
    """Canonical JSON-ready form; written verbatim into trace headers."""
    objective = {
        "kind": spec.objective.kind,
        "dimension": spec.objective.dimension,
        "timeout_s": spec.objective.timeout_s,
        "optimum_value": spec.objective.optimum_value,
    }
    if spec.objective.command is not None:
        objective["command"] = list(spec.objective.command)
    if spec.objective.tcp is not None:
        objective["tcp"] = spec.objective.tcp
    return {
        "optimizer": {
            "kind": spec.optimizer_kind,
            "learning_rate": spec.optimizer.learning_rate,
            "sharpness_radius": spec.optimizer.sharpness_radius,
            "epsilon": spec.optimizer.estimator.epsilon,
            "num_directions": spec.optimizer.estimator.num_directions,
            "direction_kind": spec.optimizer.estimator.direction_kind,
            "beta1": spec.optimizer.beta1,
            "beta2": spec.optimizer.beta2,
            "moment_epsilon": spec.optimizer.moment_epsilon,
            "sigma_floor": spec.optimizer.sigma_floor,
        },
        "objective": objective,
        "iterations": spec.iterations,
        "seeds": list(spec.seeds),
        "output_dir": spec.output_dir,
        "query_budget": spec.query_budget,
        "record_alignment": spec.record_alignment,
    }


@contextlib.contextmanager
def open_objective(spec: ObjectiveSpec) -> Iterator[Objective]:
    """Materialize the objective, managing any external peer's lifetime."""
    if spec.kind == "external":
        from .external import ExternalObjective

        adapter = ExternalObjective(
            dimension=spec.dimension,
            command=spec.command,
            tcp=spec.tcp,
            timeout_s=spec.timeout_s,
            optimum_value=spec.optimum_value,
        )
        try:
            yield adapter.as_objective()
        finally:
            adapter.close()
    else:
        fn = SyntheticFunction(kind=spec.kind, dimension=spec.dimension)
        yield fn.as_objective()


def parse_grid(doc: dict) -> dict[str, list]:
    """Validate a sweep grid: named parameter -> list of values."""
    if not isinstance(doc, dict) or not doc:
        raise ConfigError("grid must be a non-empty JSON object")
    grid = {}
    for key, values in doc.items():
        if key not in SWEEPABLE_FIELDS:
            raise ConfigError(
                f"grid key {key!r} is not sweepable; expected one of {SWEEPABLE_FIELDS}"
            )
        if not isinstance(values, list) or not values:
            raise ConfigError(f"grid values for {key!r} must be a non-empty list")
        grid[key] = values
    return grid


def load_grid(path: str) -> dict[str, list]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path} is not valid JSON: {exc}") from None
    return parse_grid(doc)
