"""Monte-Carlo checks of the estimator laws against closed forms.

Expected values here are independent of the estimator code: exact variance
and second-moment identities on quadratics and linear objectives, computed
by hand. Seeds are fixed, so every assertion is deterministic.
"""

import numpy as np

from zosa import (
    EstimatorConfig,
    QueryCounter,
    RngStream,
    classical_two_sided_estimate,
    linear_objective,
    mse_law_study,
    one_sided_estimate,
    sigma_law_study,
)
from zosa.benchmarks import SyntheticFunction


def test_sigma_law_exact_on_quadratic():
    # probe losses on 0.5||theta||^2 are l0 + eps theta.u + eps^2 d / 2 with a
    # direction-independent curvature term, so Var(l_i) = eps^2 ||theta||^2
    # exactly and E[corrected sample variance] matches it
    obj = SyntheticFunction("quadratic", 10).as_objective()
    law = sigma_law_study(obj, EstimatorConfig(1e-3, 32), 3000, 101, theta=np.ones(10))
    assert law.predicted == 1e-6 * 10.0
    assert law.relative_error <= 0.02


def test_mse_law_exact_on_linear():
    obj = linear_objective(np.ones(20))
    law = mse_law_study(obj, EstimatorConfig(1e-3, 5), 3000, 102, theta=np.zeros(20))
    assert law.predicted == 19.0 * 20.0 / 5.0
    assert law.relative_error <= 0.05


def test_mse_halves_when_directions_double():
    obj = SyntheticFunction("quadratic", 50).as_objective()
    m10 = mse_law_study(obj, EstimatorConfig(1e-3, 10), 4000, 103)
    m20 = mse_law_study(obj, EstimatorConfig(1e-3, 20), 4000, 103)
    ratio = m10.empirical / m20.empirical
    assert 1.8 <= ratio <= 2.2


def test_mse_small_at_zero_gradient_point():
    # at a stationary point only the deterministic curvature term remains:
    # estimate = (eps d / 2) * mean direction, so MSE ~ eps^2 d^2 / (4 m) * d
    obj = SyntheticFunction("quadratic", 10).as_objective()
    law = mse_law_study(obj, EstimatorConfig(1e-3, 8), 2000, 104, theta=np.zeros(10))
    assert law.empirical <= 1e-4


def test_second_moment_identity_rademacher():
    # one-sided Rademacher on a linear objective: E||g||^2 = ((m+d-1)/m)||a||^2
    a = np.ones(50)
    obj = linear_objective(a)
    cfg = EstimatorConfig(1e-3, 10)
    root = RngStream(105)
    counter = QueryCounter()
    total = 0.0
    trials = 10_000
    for i in range(trials):
        est = one_sided_estimate(obj, np.zeros(50), cfg, root.child(i), counter, diagnostic=True)
        total += float(np.dot(est.grad, est.grad))
    empirical = total / trials
    predicted = (10 + 50 - 1) / 10 * 50.0
    assert abs(empirical - predicted) / predicted <= 0.03


def test_second_moment_identity_gaussian():
    # two-sided Gaussian on a linear objective: single-draw estimates are
    # (a.z) z, and E[(a.z)^2 ||z||^2] = (d+2)||a||^2 for standard normals,
    # so E||g||^2 = ((N+d+1)/N)||a||^2 -- two units above the Rademacher
    # constant, because ||z||^2 fluctuates around d
    a = np.ones(50)
    obj = linear_objective(a)
    root = RngStream(106)
    counter = QueryCounter()
    total = 0.0
    trials = 10_000
    for i in range(trials):
        grad = classical_two_sided_estimate(
            obj, np.zeros(50), 1e-3, 10, root.child(i), counter, diagnostic=True
        )
        total += float(np.dot(grad, grad))
    empirical = total / trials
    predicted = (10 + 50 + 1) / 10 * 50.0
    assert abs(empirical - predicted) / predicted <= 0.03


def test_unbiasedness_on_quadratic():
    # the m-direction estimate is by definition the mean of m single-direction
    # estimates, so chunked averaging reproduces a large-K mean exactly
    obj = SyntheticFunction("quadratic", 10).as_objective()
    theta = np.ones(10)
    cfg = EstimatorConfig(1e-3, 1000)
    root = RngStream(4)
    counter = QueryCounter()
    acc = np.zeros(10)
    chunks = 20
    for i in range(chunks):
        acc += one_sided_estimate(obj, theta, cfg, root.child(i), counter, diagnostic=True).grad
    mean = acc / chunks
    rel = np.linalg.norm(mean - theta) / np.linalg.norm(theta)
    assert rel <= 0.03  # K = 20k single-direction estimates
