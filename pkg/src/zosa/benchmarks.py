"""Synthetic benchmark functions with analytic gradients and known optima.

All four functions have minimum value zero: quadratic and cubic at the
origin, Levy and Rosenbrock at the all-ones point. The Levy middle sum runs
over interior coordinates 2..d-1 (1-based) and is empty below d = 3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .core import Array, ConfigError, Objective, as_vector

__all__ = [
    "FUNCTION_KINDS",
    "GAP_LOG_FLOOR",
    "SyntheticFunction",
    "eval_function",
    "eval_gradient",
    "optimality_gap",
]

FUNCTION_KINDS = ("quadratic", "cubic", "levy", "rosenbrock")

# Floor applied to gaps only when taking logs for display; raw gaps are exact.
GAP_LOG_FLOOR = 1e-30


def _quadratic_values(thetas: Array) -> Array:
    return 0.5 * np.sum(thetas**2, axis=1)


def _quadratic_grad(theta: Array) -> Array:
    return theta.copy()


def _cubic_values(thetas: Array) -> Array:
    return np.sum(np.abs(thetas) ** 3 + thetas**2 / 2.0, axis=1)


def _cubic_grad(theta: Array) -> Array:
    # d/dx |x|^3 = 3 sign(x) x^2, which is 0 at 0.
    return 3.0 * np.sign(theta) * theta**2 + theta


def _levy_w(thetas: Array) -> Array:
    return 1.0 + (thetas - 1.0) / 4.0


def _levy_values(thetas: Array) -> Array:
    w = _levy_w(thetas)
    head = np.sin(np.pi * w[:, 0]) ** 2
    mid = w[:, 1:-1]
    succ = w[:, 2:]
    middle = np.sum((mid - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * succ) ** 2), axis=1)
    last = w[:, -1]
    tail = (last - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * last) ** 2)
    return head + middle + tail


def _levy_grad(theta: Array) -> Array:
    w = _levy_w(theta)
    dw = 0.25
    g = np.zeros_like(theta)
    g[0] += np.pi * np.sin(2.0 * np.pi * w[0]) * dw
    d = theta.shape[0]
    if d >= 3:
        mid = w[1:-1]
        succ = w[2:]
        # each middle term (w_j - 1)^2 (1 + 10 sin^2(pi w_{j+1})) touches two
        # coordinates: j through the square, j+1 through the sine
        g[1:-1] += 2.0 * (mid - 1.0) * (1.0 + 10.0 * np.sin(np.pi * succ) ** 2) * dw
        g[2:] += (mid - 1.0) ** 2 * 10.0 * np.pi * np.sin(2.0 * np.pi * succ) * dw
    last = w[-1]
    g[-1] += (
        2.0 * (last - 1.0) * (1.0 + np.sin(2.0 * np.pi * last) ** 2)
        + (last - 1.0) ** 2 * 2.0 * np.pi * np.sin(4.0 * np.pi * last)
    ) * dw
    return g


def _rosenbrock_values(thetas: Array) -> Array:
    head = thetas[:, :-1]
    succ = thetas[:, 1:]
    return np.sum(100.0 * (succ - head**2) ** 2 + (1.0 - head) ** 2, axis=1)


def _rosenbrock_grad(theta: Array) -> Array:
    g = np.zeros_like(theta)
    head = theta[:-1]
    succ = theta[1:]
    g[:-1] += -400.0 * head * (succ - head**2) - 2.0 * (1.0 - head)
    g[1:] += 200.0 * (succ - head**2)
    return g


_VALUES = {
    "quadratic": _quadratic_values,
    "cubic": _cubic_values,
    "levy": _levy_values,
    "rosenbrock": _rosenbrock_values,
}

_GRADS = {
    "quadratic": _quadratic_grad,
    "cubic": _cubic_grad,
    "levy": _levy_grad,
    "rosenbrock": _rosenbrock_grad,
}

_MIN_DIMENSION = {"quadratic": 1, "cubic": 1, "levy": 2, "rosenbrock": 2}


@dataclass(frozen=True)
class SyntheticFunction:
    """One of the four benchmark functions at a fixed dimension."""

    kind: str
    dimension: int

    def __post_init__(self) -> None:
        if self.kind not in FUNCTION_KINDS:
            raise ConfigError(f"kind must be one of {FUNCTION_KINDS}, got {self.kind!r}")
        if self.dimension < _MIN_DIMENSION[self.kind]:
            raise ConfigError(
                f"{self.kind} requires dimension >= {_MIN_DIMENSION[self.kind]}, "
                f"got {self.dimension}"
            )

    @property
    def optimum_value(self) -> float:
        return 0.0

    def minimizer(self) -> Array:
        if self.kind in ("quadratic", "cubic"):
            return np.zeros(self.dimension)
        return np.ones(self.dimension)

    def value(self, theta: npt.ArrayLike) -> float:
        theta = as_vector(theta, self.dimension)
        return float(_VALUES[self.kind](theta[None, :])[0])

    def value_batch(self, thetas: npt.ArrayLike) -> Array:
        thetas = np.asarray(thetas, dtype=np.float64)
        return _VALUES[self.kind](thetas)

    def gradient(self, theta: npt.ArrayLike) -> Array:
        theta = as_vector(theta, self.dimension)
        return _GRADS[self.kind](theta)

    def as_objective(self) -> Objective:
        return Objective(
            fn=self.value,
            dimension=self.dimension,
            grad=self.gradient,
            batch_fn=self.value_batch,
            optimum_value=self.optimum_value,
            name=f"{self.kind}(d={self.dimension})",
        )


def eval_function(f: SyntheticFunction, theta: npt.ArrayLike) -> float:
    return f.value(theta)


def eval_gradient(f: SyntheticFunction, theta: npt.ArrayLike) -> Array:
    return f.gradient(theta)


def optimality_gap(f: SyntheticFunction, theta: npt.ArrayLike) -> float:
    """F(theta) minus the known minimum (zero for every benchmark kind)."""
    return f.value(theta) - f.optimum_value
