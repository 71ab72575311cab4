"""Monte-Carlo checks of the estimator's statistical behaviour.

Each study compares an empirical average against a closed-form prediction
that is computable without running the estimator (analytic gradients, known
variance identities), so the estimators are never validated against
themselves. All probe evaluations here use the diagnostic query tally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import numpy.typing as npt

from .core import Array, Objective, QueryCounter, RngStream, as_vector, sample_gaussian
from .estimators import EstimatorConfig, one_sided_estimate
from .optimizers import sam_offset

__all__ = [
    "AlignmentReport",
    "GradientAlignmentReport",
    "LawReport",
    "SamAlignmentReport",
    "cosine_similarity",
    "gradient_alignment_study",
    "linear_objective",
    "mse_law_study",
    "predicted_alignment",
    "sam_alignment_study",
    "sigma_law_study",
]

# Below this norm a direction is treated as zero and cosines are defined as 0.
_NORM_FLOOR = 1e-30


def cosine_similarity(a: npt.ArrayLike, b: npt.ArrayLike) -> float:
    """Cosine of the angle between two equal-length vectors, in [-1, 1]."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na < _NORM_FLOOR or nb < _NORM_FLOOR:
        return 0.0
    cos = float(np.dot(a, b) / (na * nb))
    return max(-1.0, min(1.0, cos))


def linear_objective(slope: npt.ArrayLike) -> Objective:
    """A pure-gradient objective (zero curvature everywhere).

    Finite differences are exact on it, which makes it the cleanest probe for
    estimator laws: every deviation observed is estimator variance, not bias.
    """
    slope = as_vector(slope)

    def fn(theta: Array) -> float:
        return float(np.dot(slope, theta))

    def batch(thetas: Array) -> Array:
        return np.asarray(thetas, dtype=np.float64) @ slope

    def grad(_theta: Array) -> Array:
        return slope.copy()

    return Objective(
        fn=fn,
        dimension=slope.shape[0],
        grad=grad,
        batch_fn=batch,
        name=f"linear(d={slope.shape[0]})",
    )


def predicted_alignment(num_directions: int, dimension: int) -> float:
    """Expected cosine between a one-sided Rademacher estimate and the true
    gradient: sqrt(m / (m + d - 1)).

    Follows from the estimate's second moment, E||g||^2 =
    ((m + d - 1) / m) * ||grad L||^2: the estimate is the true gradient plus
    near-orthogonal noise of relative squared norm (d - 1) / m.
    """
    return math.sqrt(num_directions / (num_directions + dimension - 1))


@dataclass(frozen=True)
class AlignmentReport:
    """Mean/max cosine over trials, next to the closed-form prediction."""

    mean_cos: float
    max_cos: float
    trials: int
    predicted_cos: float


@dataclass(frozen=True)
class GradientAlignmentReport:
    """Alignment of both estimates with the true gradient at their points:
    `base` at the sample point, `perturbed` at the sharpness-offset point."""

    base: AlignmentReport
    perturbed: AlignmentReport
    trials: int
    predicted_cos: float


@dataclass(frozen=True)
class SamAlignmentReport(AlignmentReport):
    """Alignment of the sharpness offset with the unit true gradient, plus
    the achieved offset magnitude relative to the configured radius."""

    mean_radius_ratio: float


@dataclass(frozen=True)
class LawReport:
    """Empirical average vs closed-form prediction for one estimator law."""

    empirical: float
    predicted: float
    relative_error: float
    trials: int


def _law_report(empirical: float, predicted: float, trials: int) -> LawReport:
    if predicted != 0.0:
        rel = abs(empirical - predicted) / abs(predicted)
    else:
        rel = 0.0 if empirical == 0.0 else math.inf
    return LawReport(
        empirical=empirical, predicted=predicted, relative_error=rel, trials=trials
    )


def _study_point(
    objective: Objective, theta: Optional[npt.ArrayLike], rng: RngStream
) -> Array:
    if theta is not None:
        return as_vector(theta, objective.dimension)
    return sample_gaussian(objective.dimension, rng)


def sigma_law_study(
    objective: Objective,
    config: EstimatorConfig,
    trials: int,
    seed: int,
    theta: Optional[npt.ArrayLike] = None,
) -> LawReport:
    """Average of sigma^2 over repeated estimates at one point, against the
    prediction epsilon^2 * ||grad L(theta)||^2.

    The prediction is exact on quadratics (the curvature contribution to each
    probe loss is the same for every sign direction, so only the linear term
    fluctuates) and holds to O(epsilon^3) on smooth objectives.
    """
    root = RngStream(seed)
    point = _study_point(objective, theta, root.child(0))
    grad_norm_sq = float(np.dot(objective.gradient(point), objective.gradient(point)))
    counter = QueryCounter()
    total = 0.0
    for i in range(trials):
        est = one_sided_estimate(
            objective, point, config, root.child(1 + i), counter, diagnostic=True
        )
        total += est.sigma**2
    empirical = total / trials
    predicted = config.epsilon**2 * grad_norm_sq
    return _law_report(empirical, predicted, trials)


def mse_law_study(
    objective: Objective,
    config: EstimatorConfig,
    trials: int,
    seed: int,
    theta: Optional[npt.ArrayLike] = None,
) -> LawReport:
    """Mean squared error of the one-sided estimate at one point, against the
    small-epsilon prediction (d - 1) * ||grad L||^2 / m.

    Exact for objectives with zero curvature; curvature adds an O(epsilon)
    bias term on top.
    """
    root = RngStream(seed)
    point = _study_point(objective, theta, root.child(0))
    grad = objective.gradient(point)
    counter = QueryCounter()
    total = 0.0
    for i in range(trials):
        est = one_sided_estimate(
            objective, point, config, root.child(1 + i), counter, diagnostic=True
        )
        diff = est.grad - grad
        total += float(np.dot(diff, diff))
    empirical = total / trials
    d = objective.dimension
    predicted = (d - 1) * float(np.dot(grad, grad)) / config.num_directions
    return _law_report(empirical, predicted, trials)


def gradient_alignment_study(
    objective: Objective,
    config: EstimatorConfig,
    trials: int,
    seed: int,
    sharpness_radius: float = 1e-5,
    sigma_floor: float = 1e-12,
) -> GradientAlignmentReport:
    """Cosine similarity between gradient estimates and true gradients over
    random points theta ~ N(0, I).

    Per trial: the base estimate is compared with grad L(theta); a fresh
    estimate at the sharpness-offset point is compared with the true gradient
    there. The max statistic is the maximum over the study's trials.
    """
    root = RngStream(seed)
    counter = QueryCounter()
    base_cos = np.empty(trials)
    pert_cos = np.empty(trials)
    for i in range(trials):
        stream = root.child(i)
        point = sample_gaussian(objective.dimension, stream)
        est = one_sided_estimate(objective, point, config, stream, counter, diagnostic=True)
        base_cos[i] = cosine_similarity(est.grad, objective.gradient(point))
        offset = sam_offset(
            est.grad, est.sigma, sharpness_radius, config.epsilon, sigma_floor
        )
        shifted = point + offset
        pert = one_sided_estimate(
            objective, shifted, config, stream, counter, diagnostic=True
        )
        pert_cos[i] = cosine_similarity(pert.grad, objective.gradient(shifted))
    predicted = predicted_alignment(config.num_directions, objective.dimension)
    return GradientAlignmentReport(
        base=AlignmentReport(
            mean_cos=float(base_cos.mean()),
            max_cos=float(base_cos.max()),
            trials=trials,
            predicted_cos=predicted,
        ),
        perturbed=AlignmentReport(
            mean_cos=float(pert_cos.mean()),
            max_cos=float(pert_cos.max()),
            trials=trials,
            predicted_cos=predicted,
        ),
        trials=trials,
        predicted_cos=predicted,
    )


def sam_alignment_study(
    objective: Objective,
    config: EstimatorConfig,
    sharpness_radius: float,
    trials: int,
    seed: int,
    sigma_floor: float = 1e-12,
) -> SamAlignmentReport:
    """How closely the sharpness offset tracks radius * grad L / ||grad L||.

    Reports the mean/max cosine between the offset and the unit true gradient
    over random points, and the mean ratio ||offset|| / radius (near 1 when
    the spread-normalization is doing its job).
    """
    if not sharpness_radius > 0:
        raise ValueError(f"sharpness_radius must be positive, got {sharpness_radius}")
    root = RngStream(seed)
    counter = QueryCounter()
    cosines = np.empty(trials)
    ratios = np.empty(trials)
    for i in range(trials):
        stream = root.child(i)
        point = sample_gaussian(objective.dimension, stream)
        est = one_sided_estimate(objective, point, config, stream, counter, diagnostic=True)
        offset = sam_offset(
            est.grad, est.sigma, sharpness_radius, config.epsilon, sigma_floor
        )
        grad = objective.gradient(point)
        norm = float(np.linalg.norm(grad))
        unit_grad = grad / norm if norm >= _NORM_FLOOR else grad
        cosines[i] = cosine_similarity(offset, unit_grad)
        ratios[i] = float(np.linalg.norm(offset)) / sharpness_radius
    return SamAlignmentReport(
        mean_cos=float(cosines.mean()),
        max_cos=float(cosines.max()),
        trials=trials,
        predicted_cos=predicted_alignment(config.num_directions, objective.dimension),
        mean_radius_ratio=float(ratios.mean()),
    )
