"""Randomized zero-order gradient estimators.

Two families: the batched one-sided Rademacher estimator (the workhorse of
the adaptive optimizers, which also yields the loss standard deviation used
for step-size scaling), and the classical two-sided Gaussian estimator used
by the ZO-SGD style baselines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .core import (
    Array,
    ConfigError,
    Objective,
    QueryCounter,
    RngStream,
    as_vector,
    evaluate,
    evaluate_batch,
    gaussian_matrix,
    rademacher_matrix,
)

__all__ = [
    "EstimateResult",
    "EstimatorConfig",
    "classical_two_sided_estimate",
    "loss_std",
    "one_sided_estimate",
    "one_sided_from_directions",
    "two_sided_from_directions",
]

DIRECTION_KINDS = ("rademacher", "gaussian")


@dataclass(frozen=True)
class EstimatorConfig:
    """Scale and direction count for a randomized gradient estimate.

    epsilon is the finite-difference probe length; num_directions is how many
    random directions are averaged per estimate.
    """

    epsilon: float
    num_directions: int
    direction_kind: str = "rademacher"

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")
        if self.num_directions < 1:
            raise ConfigError(
                f"num_directions must be >= 1, got {self.num_directions}"
            )
        if self.direction_kind not in DIRECTION_KINDS:
            raise ConfigError(
                f"direction_kind must be one of {DIRECTION_KINDS}, got {self.direction_kind!r}"
            )


@dataclass(frozen=True)
class EstimateResult:
    """A one-sided estimate: gradient, probe-loss spread, and query cost.

    sigma is the Bessel-corrected sample standard deviation of the perturbed
    losses only (the base loss is excluded); it scales like
    epsilon * ||grad L|| and is what the adaptive optimizers divide by.
    """

    grad: Array
    sigma: float
    base_loss: float
    perturbed_losses: Array
    queries: int


def loss_std(losses: npt.ArrayLike) -> float:
    """Bessel-corrected sample standard deviation of a loss sequence.

    Defined as 0 for a single loss (the corrected variance has no meaning
    there) and 0 when all losses are equal.
    """
    arr = np.asarray(losses, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"expected a flat loss sequence, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("losses must be nonempty")
    if arr.size == 1:
        return 0.0
    return float(np.std(arr, ddof=1))


def one_sided_from_directions(
    objective: Objective,
    theta: npt.ArrayLike,
    directions: npt.ArrayLike,
    epsilon: float,
    counter: QueryCounter,
    *,
    diagnostic: bool = False,
) -> EstimateResult:
    """One-sided estimate with explicitly supplied direction rows.

    grad = (1 / (epsilon * m)) * sum_i (l_i - l_0) * u_i, where
    l_i = L(theta + epsilon * u_i) and l_0 = L(theta). Costs m + 1 queries.
    The reduction order is fixed by the row order, so replays are bit-exact
    regardless of how the probe losses were computed.
    """
    if not epsilon > 0:
        raise ConfigError(f"epsilon must be positive, got {epsilon}")
    theta = as_vector(theta, objective.dimension)
    directions = np.asarray(directions, dtype=np.float64)
    if directions.ndim != 2 or directions.shape[1] != objective.dimension:
        raise ConfigError(
            f"directions must have shape (m, {objective.dimension}), got {directions.shape}"
        )
    m = directions.shape[0]
    base_loss = evaluate(objective, theta, counter, diagnostic=diagnostic)
    probes = theta[None, :] + epsilon * directions
    losses = evaluate_batch(objective, probes, counter, diagnostic=diagnostic)
    grad = (losses - base_loss) @ directions / (epsilon * m)
    return EstimateResult(
        grad=grad,
        sigma=loss_std(losses),
        base_loss=base_loss,
        perturbed_losses=losses,
        queries=m + 1,
    )


def one_sided_estimate(
    objective: Objective,
    theta: npt.ArrayLike,
    config: EstimatorConfig,
    rng: RngStream,
    counter: QueryCounter,
    *,
    diagnostic: bool = False,
) -> EstimateResult:
    """Batched one-sided estimate along fresh Rademacher directions."""
    if config.direction_kind != "rademacher":
        raise ConfigError(
            "the one-sided estimator uses Rademacher directions; "
            f"got {config.direction_kind!r}"
        )
    directions = rademacher_matrix(config.num_directions, objective.dimension, rng)
    return one_sided_from_directions(
        objective, theta, directions, config.epsilon, counter, diagnostic=diagnostic
    )


def two_sided_from_directions(
    objective: Objective,
    theta: npt.ArrayLike,
    directions: npt.ArrayLike,
    epsilon: float,
    counter: QueryCounter,
    *,
    diagnostic: bool = False,
) -> Array:
    """Two-sided (central) estimate with explicitly supplied directions.

    Averages (L(theta + eps z) - L(theta - eps z)) / (2 eps) * z over the
    rows z. Costs 2 * N queries; there is no base-point evaluation.
    """
    if not epsilon > 0:
        raise ConfigError(f"epsilon must be positive, got {epsilon}")
    theta = as_vector(theta, objective.dimension)
    directions = np.asarray(directions, dtype=np.float64)
    if directions.ndim != 2 or directions.shape[1] != objective.dimension:
        raise ConfigError(
            f"directions must have shape (N, {objective.dimension}), got {directions.shape}"
        )
    n = directions.shape[0]
    plus = evaluate_batch(
        objective, theta[None, :] + epsilon * directions, counter, diagnostic=diagnostic
    )
    minus = evaluate_batch(
        objective, theta[None, :] - epsilon * directions, counter, diagnostic=diagnostic
    )
    quotients = (plus - minus) / (2.0 * epsilon)
    return quotients @ directions / n


def classical_two_sided_estimate(
    objective: Objective,
    theta: npt.ArrayLike,
    epsilon: float,
    num_directions: int,
    rng: RngStream,
    counter: QueryCounter,
    *,
    diagnostic: bool = False,
) -> Array:
    """Classical central-difference estimate along Gaussian directions."""
    if num_directions < 1:
        raise ConfigError(f"num_directions must be >= 1, got {num_directions}")
    directions = gaussian_matrix(num_directions, objective.dimension, rng)
    return two_sided_from_directions(
        objective, theta, directions, epsilon, counter, diagnostic=diagnostic
    )
