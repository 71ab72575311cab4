import numpy as np
import pytest

from zosa import (
    ConfigError,
    DimensionMismatchError,
    SyntheticFunction,
    eval_function,
    eval_gradient,
    optimality_gap,
)
from zosa.benchmarks import FUNCTION_KINDS

from testkit import central_difference


def test_rosenbrock_minimum_at_ones():
    f = SyntheticFunction("rosenbrock", 50)
    assert eval_function(f, np.ones(50)) == 0.0
    assert optimality_gap(f, np.ones(50)) == 0.0


def test_rosenbrock_origin_value():
    # 100 * (0 - 0)^2 + (1 - 0)^2 = 1
    assert eval_function(SyntheticFunction("rosenbrock", 2), [0.0, 0.0]) == 1.0


def test_cubic_hand_value():
    # |1|^3 + 1/2
    assert eval_function(SyntheticFunction("cubic", 1), [1.0]) == 1.5


def test_quadratic_values_and_gap():
    f = SyntheticFunction("quadratic", 2)
    assert eval_function(f, [0.0, 0.0]) == 0.0
    assert optimality_gap(f, [2.0, 0.0]) == 2.0


@pytest.mark.parametrize("d", [2, 3, 5, 10])
def test_levy_vanishes_at_ones(d):
    assert eval_function(SyntheticFunction("levy", d), np.ones(d)) <= 1e-12


def test_levy_dimension_two_has_empty_middle_sum():
    # theta=[3,5]: w=[1.5, 2]; sin^2(1.5 pi) = 1 and (2-1)^2 (1+sin^2(4 pi)) = 1
    value = eval_function(SyntheticFunction("levy", 2), [3.0, 5.0])
    assert value == pytest.approx(2.0, abs=1e-12)


def test_quadratic_gradient_is_identity():
    f = SyntheticFunction("quadratic", 4)
    theta = np.array([1.0, -2.0, 0.5, 0.0])
    assert np.array_equal(eval_gradient(f, theta), theta)
    assert np.array_equal(eval_gradient(f, np.zeros(4)), np.zeros(4))


def test_cubic_gradient_hand_values():
    f = SyntheticFunction("cubic", 1)
    # 3 * sign(x) * x^2 + x
    assert eval_gradient(f, [2.0])[0] == 14.0
    assert eval_gradient(f, [-2.0])[0] == -14.0
    assert eval_gradient(f, [0.0])[0] == 0.0


@pytest.mark.parametrize("kind", FUNCTION_KINDS)
def test_gradient_vanishes_at_minimizer(kind):
    f = SyntheticFunction(kind, 10)
    grad = eval_gradient(f, f.minimizer())
    assert np.linalg.norm(grad) <= 1e-12


@pytest.mark.parametrize("kind", FUNCTION_KINDS)
@pytest.mark.parametrize("d", [2, 10, 100])
def test_gradient_matches_central_differences(kind, d):
    f = SyntheticFunction(kind, d)
    rng = np.random.default_rng(20 + d)
    for _ in range(20):
        theta = rng.standard_normal(d)
        analytic = f.gradient(theta)
        numeric = central_difference(f.value_batch, theta, h=1e-6)
        denom = max(float(np.linalg.norm(analytic)), 1e-12)
        assert np.linalg.norm(analytic - numeric) / denom <= 1e-5


@pytest.mark.parametrize("kind", FUNCTION_KINDS)
def test_values_are_nonnegative(kind):
    f = SyntheticFunction(kind, 12)
    rng = np.random.default_rng(77)
    values = f.value_batch(rng.standard_normal((200, 12)) * 3.0)
    assert np.all(values >= 0.0)


def test_batch_matches_scalar_rows():
    for kind in FUNCTION_KINDS:
        f = SyntheticFunction(kind, 6)
        thetas = np.random.default_rng(5).standard_normal((10, 6))
        batch = f.value_batch(thetas)
        scalar = np.array([f.value(row) for row in thetas])
        assert np.array_equal(batch, scalar)


def test_dimension_validation():
    with pytest.raises(ConfigError):
        SyntheticFunction("levy", 1)
    with pytest.raises(ConfigError):
        SyntheticFunction("rosenbrock", 1)
    with pytest.raises(ConfigError):
        SyntheticFunction("sphere", 3)
    with pytest.raises(DimensionMismatchError):
        SyntheticFunction("quadratic", 3).value(np.zeros(4))


def test_as_objective_wiring():
    obj = SyntheticFunction("rosenbrock", 5).as_objective()
    assert obj.dimension == 5
    assert obj.optimum_value == 0.0
    theta = np.full(5, 0.5)
    assert obj.fn(theta) == SyntheticFunction("rosenbrock", 5).value(theta)
    assert obj.grad is not None and obj.batch_fn is not None
