"""Foundational types shared by the whole toolkit: dense parameter vectors,
splittable deterministic random streams, the black-box objective interface,
and query accounting."""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import numpy.typing as npt

Array = npt.NDArray[np.float64]

__all__ = [
    "Array",
    "ConfigError",
    "DimensionMismatchError",
    "NonFiniteLossError",
    "Objective",
    "QueryCounter",
    "RngStream",
    "as_vector",
    "evaluate",
    "evaluate_batch",
    "gaussian_matrix",
    "rademacher_matrix",
    "sample_gaussian",
    "sample_rademacher",
    "vector_digest",
]


class ConfigError(ValueError):
    """Invalid configuration value (non-positive scale, zero directions, ...)."""


class DimensionMismatchError(ValueError):
    """Vector length does not match the objective's dimension."""


class NonFiniteLossError(RuntimeError):
    """An objective evaluation produced NaN or infinity.

    Carries a short content hash of the offending parameter vector plus any
    caller-supplied context (e.g. the iteration number), so diverging runs can
    be traced back to the exact point that blew up.
    """

    def __init__(self, loss: float, theta: Array, context: str = ""):
        self.loss = float(loss)
        self.theta_digest = vector_digest(theta)
        self.context = context
        msg = f"non-finite loss {self.loss!r} at theta#{self.theta_digest}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


def vector_digest(theta: npt.ArrayLike) -> str:
    """Short content hash of a parameter vector, for error reports."""
    data = np.ascontiguousarray(theta, dtype=np.float64).tobytes()
    return hashlib.sha1(data).hexdigest()[:12]


def as_vector(values: npt.ArrayLike, dimension: Optional[int] = None) -> Array:
    """Coerce to a 1-D float64 array, checking finiteness and optional length."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionMismatchError(f"expected a 1-D vector, got shape {arr.shape}")
    if dimension is not None and arr.shape[0] != dimension:
        raise DimensionMismatchError(
            f"vector has length {arr.shape[0]}, expected {dimension}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector entries must all be finite")
    return arr


class RngStream:
    """Deterministic, splittable random stream.

    Every sample is fully determined by (seed, path, draw order), so replays
    are bit-identical. `child` streams are pairwise independent by
    construction and may be consumed in any order, which is what makes
    multi-seed sweeps safe to parallelize.
    """

    __slots__ = ("seed", "path", "_gen")

    def __init__(self, seed: int, path: tuple[int, ...] = ()):
        self.seed = int(seed)
        self.path = tuple(int(p) for p in path)
        self._gen: Optional[np.random.Generator] = None

    @property
    def generator(self) -> np.random.Generator:
        if self._gen is None:
            seq = np.random.SeedSequence(self.seed, spawn_key=self.path)
            # Philox is counter-based: cheap to key per stream, stable across
            # platforms and numpy versions.
            self._gen = np.random.Generator(np.random.Philox(seq))
        return self._gen

    def child(self, index: int) -> "RngStream":
        return RngStream(self.seed, self.path + (int(index),))

    def split(self, n: int) -> list["RngStream"]:
        return [self.child(i) for i in range(n)]

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, path={self.path})"


def rademacher_matrix(rows: int, dimension: int, rng: RngStream) -> Array:
    """(rows, dimension) matrix of independent +/-1 entries."""
    if dimension < 1:
        raise ConfigError("dimension must be >= 1")
    if rows < 1:
        raise ConfigError("rows must be >= 1")
    bits = rng.generator.integers(0, 2, size=(rows, dimension))
    return 2.0 * bits.astype(np.float64) - 1.0


def gaussian_matrix(rows: int, dimension: int, rng: RngStream) -> Array:
    """(rows, dimension) matrix of independent standard-normal entries."""
    if dimension < 1:
        raise ConfigError("dimension must be >= 1")
    if rows < 1:
        raise ConfigError("rows must be >= 1")
    return rng.generator.standard_normal((rows, dimension))


def sample_rademacher(dimension: int, rng: RngStream) -> Array:
    """One random sign vector; note ||u||^2 == dimension exactly."""
    return rademacher_matrix(1, dimension, rng)[0]


def sample_gaussian(dimension: int, rng: RngStream) -> Array:
    """One standard-normal vector."""
    return gaussian_matrix(1, dimension, rng)[0]


class QueryCounter:
    """Tally of objective evaluations.

    Optimization queries and diagnostic queries are tracked separately so
    instrumentation (trace losses, alignment probes) never eats into a run's
    query budget. Increments are atomic; counts never decrease.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._count = 0
        self._diagnostic_count = 0

    @property
    def count(self) -> int:
        return self._count

    @property
    def diagnostic_count(self) -> int:
        return self._diagnostic_count

    def add(self, n: int = 1, *, diagnostic: bool = False) -> None:
        if n < 0:
            raise ValueError("query counts never decrease")
        with self._lock:
            if diagnostic:
                self._diagnostic_count += n
            else:
                self._count += n

    def __repr__(self) -> str:
        return f"QueryCounter(count={self._count}, diagnostic={self._diagnostic_count})"


@dataclass(frozen=True)
class Objective:
    """A black-box scalar loss over R^d.

    `fn` must be deterministic: the same input vector always yields the same
    loss. `grad` is the optional analytic gradient (available for the
    synthetic benchmarks, used only by diagnostics). `batch_fn` optionally
    evaluates a (k, d) block of points in one call; estimators use it to
    batch their perturbation probes.
    """

    fn: Callable[[Array], float]
    dimension: int
    grad: Optional[Callable[[Array], Array]] = None
    batch_fn: Optional[Callable[[Array], Array]] = None
    optimum_value: Optional[float] = None
    name: str = ""

    def gradient(self, theta: npt.ArrayLike) -> Array:
        if self.grad is None:
            raise ValueError(f"objective {self.name!r} has no analytic gradient")
        theta = as_vector(theta, self.dimension)
        out = as_vector(self.grad(theta), self.dimension)
        return out


def evaluate(
    objective: Objective,
    theta: npt.ArrayLike,
    counter: QueryCounter,
    *,
    diagnostic: bool = False,
    context: str = "",
) -> float:
    """Evaluate the objective once, counting the query.

    Diagnostic evaluations go to the separate diagnostic tally. A non-finite
    loss raises `NonFiniteLossError` rather than propagating silently: a
    clamped NaN would corrupt every downstream loss-variance statistic.
    """
    theta = as_vector(theta, objective.dimension)
    counter.add(1, diagnostic=diagnostic)
    loss = float(objective.fn(theta))
    if not np.isfinite(loss):
        raise NonFiniteLossError(loss, theta, context)
    return loss


def evaluate_batch(
    objective: Objective,
    thetas: npt.ArrayLike,
    counter: QueryCounter,
    *,
    diagnostic: bool = False,
    context: str = "",
) -> Array:
    """Evaluate a (k, d) block of points, counting k queries.

    Falls back to row-by-row evaluation when the objective has no batch form.
    The row order of the result always matches the input order.
    """
    thetas = np.asarray(thetas, dtype=np.float64)
    if thetas.ndim != 2 or thetas.shape[1] != objective.dimension:
        raise DimensionMismatchError(
            f"expected shape (k, {objective.dimension}), got {thetas.shape}"
        )
    counter.add(thetas.shape[0], diagnostic=diagnostic)
    if objective.batch_fn is not None:
        losses = np.asarray(objective.batch_fn(thetas), dtype=np.float64)
    else:
        losses = np.array([float(objective.fn(row)) for row in thetas])
    if losses.shape != (thetas.shape[0],):
        raise ValueError(
            f"batch evaluation returned shape {losses.shape}, expected ({thetas.shape[0]},)"
        )
    bad = ~np.isfinite(losses)
    if bad.any():
        i = int(np.argmax(bad))
        raise NonFiniteLossError(losses[i], thetas[i], context or f"batch row {i}")
    return losses
