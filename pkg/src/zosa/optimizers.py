"""Zero-order step rules behind a single step-function contract.

The adaptive optimizers (zosa, fzoo) scale their steps by the spread of the
probe losses. That spread, sigma, is measured in loss units and grows like
epsilon * ||grad L||, so sigma / epsilon is a direct estimate of the local
gradient magnitude; dividing the learning rate by it yields normalized-SGD
behaviour: larger steps on flat terrain, smaller steps on steep terrain.

Every step rule consumes a fixed, exact number of objective queries:

    zosa          2 * (m + 1)
    fzoo          m + 1
    zo_sgd        2 * N
    zo_sign_sgd   2 * N
    zo_adamm      2 * N
    zo_rmsprop    2 * N

where m (respectively N) is the configured number of directions. Trace
losses for the two-sided family are read with diagnostic queries, which are
tallied separately and never touch the optimization budget.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .core import (
    Array,
    ConfigError,
    NonFiniteLossError,
    Objective,
    QueryCounter,
    RngStream,
    evaluate,
    sample_gaussian,
)
from .estimators import (
    EstimatorConfig,
    classical_two_sided_estimate,
    one_sided_estimate,
)

__all__ = [
    "OPTIMIZER_KINDS",
    "DivergenceError",
    "OptimizerConfig",
    "OptimizerState",
    "RunResult",
    "StepReport",
    "TraceRow",
    "fzoo_step",
    "per_step_queries",
    "run",
    "sam_offset",
    "zo_adamm_step",
    "zo_rmsprop_step",
    "zo_sgd_step",
    "zo_sign_sgd_step",
    "zosa_step",
]


class DivergenceError(RuntimeError):
    """A parameter update produced non-finite entries."""

    def __init__(self, iteration: int, step_size: float):
        self.iteration = iteration
        self.step_size = step_size
        super().__init__(
            f"non-finite parameter update at iteration {iteration} "
            f"(step size {step_size:.3e})"
        )


@dataclass(frozen=True)
class OptimizerConfig:
    """Hyperparameters shared by all step rules.

    sharpness_radius only matters for zosa; beta1/beta2/moment_epsilon only
    for the moment-based baselines. sigma_floor guards the adaptive division:
    when the measured loss spread falls at or below it, the optimizer takes
    the plain learning_rate instead of dividing by a denormal-small number.
    """

    learning_rate: float
    estimator: EstimatorConfig
    sharpness_radius: float = 0.0
    beta1: float = 0.9
    beta2: float = 0.999
    moment_epsilon: float = 1e-8
    sigma_floor: float = 1e-12

    def __post_init__(self) -> None:
        if not self.learning_rate > 0:
            raise ConfigError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.sharpness_radius < 0:
            raise ConfigError(
                f"sharpness_radius must be non-negative, got {self.sharpness_radius}"
            )
        for name in ("beta1", "beta2"):
            value = getattr(self, name)
            if not 0.0 <= value < 1.0:
                raise ConfigError(f"{name} must lie in [0, 1), got {value}")
        if not self.moment_epsilon > 0:
            raise ConfigError(f"moment_epsilon must be positive, got {self.moment_epsilon}")
        if not self.sigma_floor > 0:
            raise ConfigError(f"sigma_floor must be positive, got {self.sigma_floor}")


@dataclass
class OptimizerState:
    """Mutable per-run state: parameters, step count, moments, RNG stream."""

    theta: Array
    rng: RngStream
    t: int = 0
    first_moment: Optional[Array] = None
    second_moment: Optional[Array] = None


@dataclass(frozen=True)
class StepReport:
    """What one step observed: base loss, estimate norms, probe spreads.

    grad_est is the raw gradient estimate the update used; the run loop only
    consumes it for optional alignment diagnostics, it never appears in
    persisted traces.
    """

    loss_before: float
    grad_norm_est: float
    queries_used: int
    sigma: Optional[float] = None
    sigma_pert: Optional[float] = None
    eps_sam_norm: Optional[float] = None
    grad_est: Optional[Array] = None


def sam_offset(
    grad: Array,
    sigma: float,
    sharpness_radius: float,
    epsilon: float,
    sigma_floor: float,
) -> Array:
    """Sharpness-seeking parameter offset: radius * grad / (sigma / epsilon).

    sigma / epsilon estimates ||grad L||, so the offset has magnitude close
    to sharpness_radius and points along the estimated gradient. Invariant
    under positive rescaling of the loss (grad and sigma scale together).
    Zero whenever sigma is at or below the floor.
    """
    if sigma <= sigma_floor:
        return np.zeros_like(grad)
    return sharpness_radius * epsilon * grad / sigma


def _adaptive_rate(
    learning_rate: float, sigma: float, epsilon: float, sigma_floor: float
) -> float:
    """learning_rate / (sigma / epsilon), falling back to learning_rate when
    the spread is at or below the floor."""
    if sigma <= sigma_floor:
        return learning_rate
    return learning_rate * epsilon / sigma


def _checked_update(theta: Array, step: Array, iteration: int, step_size: float) -> Array:
    new_theta = theta - step
    if not np.all(np.isfinite(new_theta)):
        raise DivergenceError(iteration, step_size)
    return new_theta


def zosa_step(
    state: OptimizerState,
    objective: Objective,
    config: OptimizerConfig,
    counter: QueryCounter,
) -> tuple[OptimizerState, StepReport]:
    """Sharpness-aware adaptive step.

    Estimates the gradient and loss spread at theta, offsets theta along the
    estimate with magnitude near sharpness_radius, re-estimates with fresh
    directions at the offset point, and finally updates the *original* theta
    with the spread-normalized second estimate. The first estimate only
    steers the offset; it never enters the update.
    """
    est = one_sided_estimate(objective, state.theta, config.estimator, state.rng, counter)
    epsilon = config.estimator.epsilon
    offset = sam_offset(
        est.grad, est.sigma, config.sharpness_radius, epsilon, config.sigma_floor
    )
    pert = one_sided_estimate(
        objective, state.theta + offset, config.estimator, state.rng, counter
    )
    rate = _adaptive_rate(config.learning_rate, pert.sigma, epsilon, config.sigma_floor)
    new_theta = _checked_update(state.theta, rate * pert.grad, state.t, rate)
    new_state = replace(state, theta=new_theta, t=state.t + 1)
    report = StepReport(
        loss_before=est.base_loss,
        grad_norm_est=float(np.linalg.norm(pert.grad)),
        queries_used=est.queries + pert.queries,
        sigma=est.sigma,
        sigma_pert=pert.sigma,
        eps_sam_norm=float(np.linalg.norm(offset)),
        grad_est=pert.grad,
    )
    return new_state, report


def fzoo_step(
    state: OptimizerState,
    objective: Objective,
    config: OptimizerConfig,
    counter: QueryCounter,
) -> tuple[OptimizerState, StepReport]:
    """Single-estimate adaptive step: theta minus the spread-normalized
    one-sided estimate at theta. Half the query cost of zosa."""
    est = one_sided_estimate(objective, state.theta, config.estimator, state.rng, counter)
    rate = _adaptive_rate(
        config.learning_rate, est.sigma, config.estimator.epsilon, config.sigma_floor
    )
    new_theta = _checked_update(state.theta, rate * est.grad, state.t, rate)
    new_state = replace(state, theta=new_theta, t=state.t + 1)
    report = StepReport(
        loss_before=est.base_loss,
        grad_norm_est=float(np.linalg.norm(est.grad)),
        queries_used=est.queries,
        sigma=est.sigma,
        grad_est=est.grad,
    )
    return new_state, report


def _classical_estimate(
    state: OptimizerState,
    objective: Objective,
    config: OptimizerConfig,
    counter: QueryCounter,
) -> tuple[float, Array]:
    """Shared plumbing for the two-sided baselines: diagnostic base loss plus
    a central-difference Gaussian estimate."""
    loss_before = evaluate(objective, state.theta, counter, diagnostic=True)
    grad = classical_two_sided_estimate(
        objective,
        state.theta,
        config.estimator.epsilon,
        config.estimator.num_directions,
        state.rng,
        counter,
    )
    return loss_before, grad


def zo_sgd_step(
    state: OptimizerState,
    objective: Objective,
    config: OptimizerConfig,
    counter: QueryCounter,
) -> tuple[OptimizerState, StepReport]:
    """Plain SGD on the two-sided Gaussian estimate."""
    loss_before, grad = _classical_estimate(state, objective, config, counter)
    new_theta = _checked_update(
        state.theta, config.learning_rate * grad, state.t, config.learning_rate
    )
    new_state = replace(state, theta=new_theta, t=state.t + 1)
    report = StepReport(
        loss_before=loss_before,
        grad_norm_est=float(np.linalg.norm(grad)),
        queries_used=2 * config.estimator.num_directions,
        grad_est=grad,
    )
    return new_state, report


def zo_sign_sgd_step(
    state: OptimizerState,
    objective: Objective,
    config: OptimizerConfig,
    counter: QueryCounter,
) -> tuple[OptimizerState, StepReport]:
    """Element-wise sign of the estimate times the learning rate; sign(0) = 0."""
    loss_before, grad = _classical_estimate(state, objective, config, counter)
    new_theta = _checked_update(
        state.theta, config.learning_rate * np.sign(grad), state.t, config.learning_rate
    )
    new_state = replace(state, theta=new_theta, t=state.t + 1)
    report = StepReport(
        loss_before=loss_before,
        grad_norm_est=float(np.linalg.norm(grad)),
        queries_used=2 * config.estimator.num_directions,
        grad_est=grad,
    )
    return new_state, report


def zo_adamm_step(
    state: OptimizerState,
    objective: Objective,
    config: OptimizerConfig,
    counter: QueryCounter,
) -> tuple[OptimizerState, StepReport]:
    """Adam-style moments on the two-sided estimate, with bias correction."""
    loss_before, grad = _classical_estimate(state, objective, config, counter)
    m = state.first_moment if state.first_moment is not None else np.zeros_like(grad)
    v = state.second_moment if state.second_moment is not None else np.zeros_like(grad)
    m = config.beta1 * m + (1.0 - config.beta1) * grad
    v = config.beta2 * v + (1.0 - config.beta2) * grad**2
    t = state.t + 1
    m_hat = m / (1.0 - config.beta1**t)
    v_hat = v / (1.0 - config.beta2**t)
    step = config.learning_rate * m_hat / (np.sqrt(v_hat) + config.moment_epsilon)
    new_theta = _checked_update(state.theta, step, state.t, config.learning_rate)
    new_state = replace(
        state, theta=new_theta, t=t, first_moment=m, second_moment=v
    )
    report = StepReport(
        loss_before=loss_before,
        grad_norm_est=float(np.linalg.norm(grad)),
        queries_used=2 * config.estimator.num_directions,
        grad_est=grad,
    )
    return new_state, report


def zo_rmsprop_step(
    state: OptimizerState,
    objective: Objective,
    config: OptimizerConfig,
    counter: QueryCounter,
) -> tuple[OptimizerState, StepReport]:
    """Second-moment-only scaling of the two-sided estimate."""
    loss_before, grad = _classical_estimate(state, objective, config, counter)
    v = state.second_moment if state.second_moment is not None else np.zeros_like(grad)
    v = config.beta2 * v + (1.0 - config.beta2) * grad**2
    step = config.learning_rate * grad / (np.sqrt(v) + config.moment_epsilon)
    new_theta = _checked_update(state.theta, step, state.t, config.learning_rate)
    new_state = replace(state, theta=new_theta, t=state.t + 1, second_moment=v)
    report = StepReport(
        loss_before=loss_before,
        grad_norm_est=float(np.linalg.norm(grad)),
        queries_used=2 * config.estimator.num_directions,
        grad_est=grad,
    )
    return new_state, report


StepFunction = Callable[
    [OptimizerState, Objective, OptimizerConfig, QueryCounter],
    tuple[OptimizerState, StepReport],
]

STEP_FUNCTIONS: dict[str, StepFunction] = {
    "zosa": zosa_step,
    "fzoo": fzoo_step,
    "zo_sgd": zo_sgd_step,
    "zo_sign_sgd": zo_sign_sgd_step,
    "zo_adamm": zo_adamm_step,
    "zo_rmsprop": zo_rmsprop_step,
}

OPTIMIZER_KINDS = tuple(STEP_FUNCTIONS)


def per_step_queries(optimizer_kind: str, config: OptimizerConfig) -> int:
    """Exact optimization-query cost of one step of the given rule."""
    m = config.estimator.num_directions
    if optimizer_kind == "zosa":
        return 2 * (m + 1)
    if optimizer_kind == "fzoo":
        return m + 1
    if optimizer_kind in ("zo_sgd", "zo_sign_sgd", "zo_adamm", "zo_rmsprop"):
        return 2 * m
    raise ConfigError(f"unknown optimizer kind {optimizer_kind!r}")


@dataclass
class TraceRow:
    """One iteration's record, in persisted column order."""

    iter: int
    loss: float
    gap: float
    sigma: Optional[float]
    sigma_pert: Optional[float]
    eps_sam_norm: Optional[float]
    queries_cum: int
    cos_true: Optional[float]
    wall_ms: float


@dataclass
class RunResult:
    """Trace rows plus end-of-run bookkeeping.

    failure is None for a clean run; otherwise it describes why the trace was
    truncated (divergence or a non-finite loss) and the rows cover only the
    completed iterations.
    """

    rows: list[TraceRow]
    failure: Optional[str]
    final_theta: Array
    queries: int
    diagnostic_queries: int


def run(
    optimizer_kind: str,
    objective: Objective,
    config: OptimizerConfig,
    iterations: int,
    seed: int,
    *,
    query_budget: Optional[int] = None,
    record_alignment: bool = False,
) -> RunResult:
    """Apply one step rule for `iterations` steps (or until the query budget
    would be exceeded), starting from theta0 ~ N(0, I).

    Fully deterministic given (optimizer_kind, config, seed): the starting
    point and every probe direction come from child streams of the seed.
    record_alignment adds the cosine between each step's gradient estimate
    and the analytic gradient (objectives without gradients leave the column
    empty); the extra gradient calls are free and the trace loss of the
    two-sided baselines uses diagnostic queries only.
    """
    if iterations < 1:
        raise ConfigError(f"iterations must be >= 1, got {iterations}")
    try:
        step_fn = STEP_FUNCTIONS[optimizer_kind]
    except KeyError:
        raise ConfigError(
            f"unknown optimizer kind {optimizer_kind!r}; expected one of {OPTIMIZER_KINDS}"
        ) from None
    root = RngStream(seed)
    theta0 = sample_gaussian(objective.dimension, root.child(0))
    state = OptimizerState(theta=theta0, rng=root.child(1))
    counter = QueryCounter()
    step_cost = per_step_queries(optimizer_kind, config)
    optimum = objective.optimum_value if objective.optimum_value is not None else 0.0

    rows: list[TraceRow] = []
    failure: Optional[str] = None
    for t in range(1, iterations + 1):
        if query_budget is not None and counter.count + step_cost > query_budget:
            break
        theta_before = state.theta
        start = time.perf_counter()
        try:
            state, report = step_fn(state, objective, config, counter)
        except (DivergenceError, NonFiniteLossError) as exc:
            failure = f"iteration {t}: {exc}"
            break
        wall_ms = (time.perf_counter() - start) * 1e3
        cos_true = None
        if record_alignment and objective.grad is not None and report.grad_est is not None:
            from .diagnostics import cosine_similarity

            cos_true = cosine_similarity(report.grad_est, objective.gradient(theta_before))
        rows.append(
            TraceRow(
                iter=t,
                loss=report.loss_before,
                gap=report.loss_before - optimum,
                sigma=report.sigma,
                sigma_pert=report.sigma_pert,
                eps_sam_norm=report.eps_sam_norm,
                queries_cum=counter.count,
                cos_true=cos_true,
                wall_ms=wall_ms,
            )
        )
    return RunResult(
        rows=rows,
        failure=failure,
        final_theta=state.theta,
        queries=counter.count,
        diagnostic_queries=counter.diagnostic_count,
    )
