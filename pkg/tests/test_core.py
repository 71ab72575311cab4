import threading

import numpy as np
import pytest

from zosa import (
    ConfigError,
    DimensionMismatchError,
    NonFiniteLossError,
    Objective,
    QueryCounter,
    RngStream,
    evaluate,
    evaluate_batch,
    sample_gaussian,
    sample_rademacher,
)
from zosa.core import as_vector

from testkit import quadratic_objective


def test_evaluate_quadratic_at_zero_is_zero():
    counter = QueryCounter()
    assert evaluate(quadratic_objective(10), np.zeros(10), counter) == 0.0
    assert counter.count == 1


def test_evaluate_quadratic_ones_pair():
    # 0.5 * (1 + 1)
    counter = QueryCounter()
    assert evaluate(quadratic_objective(2), [1.0, 1.0], counter) == 1.0


def test_evaluate_is_deterministic():
    counter = QueryCounter()
    obj = quadratic_objective(7)
    theta = RngStream(3).generator.standard_normal(7)
    first = evaluate(obj, theta, counter)
    second = evaluate(obj, theta, counter)
    assert first == second


def test_evaluate_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        evaluate(quadratic_objective(3), np.zeros(4), QueryCounter())


def test_evaluate_nonfinite_loss_carries_digest():
    obj = Objective(fn=lambda theta: float("nan"), dimension=2)
    with pytest.raises(NonFiniteLossError) as excinfo:
        evaluate(obj, np.ones(2), QueryCounter(), context="iteration 9")
    err = excinfo.value
    assert len(err.theta_digest) == 12
    assert err.theta_digest in str(err)
    assert "iteration 9" in str(err)


def test_evaluate_batch_matches_scalar_and_counts():
    obj = quadratic_objective(4)
    counter = QueryCounter()
    thetas = RngStream(5).generator.standard_normal((6, 4))
    losses = evaluate_batch(obj, thetas, counter)
    assert counter.count == 6
    for row, loss in zip(thetas, losses):
        assert loss == obj.fn(row)


def test_evaluate_batch_without_batch_fn():
    obj = Objective(fn=lambda t: float(t.sum()), dimension=3)
    losses = evaluate_batch(obj, np.eye(3), QueryCounter())
    assert np.array_equal(losses, np.ones(3))


def test_diagnostic_queries_tally_separately():
    counter = QueryCounter()
    obj = quadratic_objective(2)
    evaluate(obj, np.zeros(2), counter, diagnostic=True)
    evaluate(obj, np.zeros(2), counter)
    assert counter.count == 1
    assert counter.diagnostic_count == 1


def test_counter_rejects_decrease():
    with pytest.raises(ValueError):
        QueryCounter().add(-1)


def test_counter_concurrent_increments_are_exact():
    counter = QueryCounter()

    def bump():
        for _ in range(1000):
            counter.add(1)
            counter.add(1, diagnostic=True)

    threads = [threading.Thread(target=bump) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert counter.count == 8000
    assert counter.diagnostic_count == 8000


def test_rademacher_entries_and_norm():
    u = sample_rademacher(5, RngStream(1))
    assert set(np.unique(u)) <= {-1.0, 1.0}
    assert float(np.dot(u, u)) == 5.0


def test_rademacher_rejects_zero_dimension():
    with pytest.raises(ConfigError):
        sample_rademacher(0, RngStream(1))
    with pytest.raises(ConfigError):
        sample_gaussian(0, RngStream(1))


def test_rademacher_per_coordinate_mean():
    # 1e5 samples, d=100: CLT says |mean| stays within ~6 sigma = 0.019
    rng = RngStream(42)
    total = np.zeros(100)
    from zosa.core import rademacher_matrix

    for _ in range(10):
        total += rademacher_matrix(10_000, 100, rng).sum(axis=0)
    mean = total / 100_000
    assert np.all(np.abs(mean) <= 0.02)


def test_gaussian_sample_moments():
    x = sample_gaussian(100_000, RngStream(7))
    assert abs(float(x.mean())) <= 0.02
    assert 0.98 <= float(x.var(ddof=1)) <= 1.02


def test_stream_replay_is_bit_identical():
    a = sample_rademacher(64, RngStream(9, (2, 5)))
    b = sample_rademacher(64, RngStream(9, (2, 5)))
    assert np.array_equal(a, b)
    g1 = sample_gaussian(64, RngStream(9, (2, 5)))
    g2 = sample_gaussian(64, RngStream(9, (2, 5)))
    assert np.array_equal(g1, g2)


def test_stream_draw_index_advances():
    rng = RngStream(9)
    first = sample_rademacher(64, rng)
    second = sample_rademacher(64, rng)
    assert not np.array_equal(first, second)


def test_child_streams_differ_and_are_deterministic():
    root = RngStream(13)
    a = sample_gaussian(32, root.child(0))
    b = sample_gaussian(32, root.child(1))
    assert not np.array_equal(a, b)
    assert np.array_equal(a, sample_gaussian(32, RngStream(13).child(0)))
    assert [s.path for s in RngStream(13).split(3)] == [(0,), (1,), (2,)]


def test_as_vector_validation():
    with pytest.raises(DimensionMismatchError):
        as_vector(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        as_vector([1.0, float("inf")])
