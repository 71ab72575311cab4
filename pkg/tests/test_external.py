import json
import os
import sys
import threading

import numpy as np
import pytest

from zosa import ExternalObjective, NonFiniteLossError, ProtocolError, SyntheticFunction
from zosa.config import ObjectiveSpec, RunSpec, open_objective
from zosa.estimators import EstimatorConfig
from zosa.experiment import run_experiment
from zosa.optimizers import OptimizerConfig, run
from zosa.peer import serve_tcp
from zosa.tracefile import read_trace, trace_filename


def _peer_command(function, dimension, extra=()):
    return [sys.executable, "-m", "zosa.peer", "--function", function, "--dimension", str(dimension), *extra]


def _script_peer(tmp_path, body):
    path = tmp_path / "peer_script.py"
    path.write_text("import sys, json\n" + body)
    return [sys.executable, str(path)]


def test_echo_peer_matches_builtin_batch_values():
    fn = SyntheticFunction("quadratic", 6)
    thetas = np.random.default_rng(3).standard_normal((5, 6))
    with ExternalObjective(6, command=_peer_command("quadratic", 6)) as peer:
        losses = peer.eval_batch(thetas)
    assert np.array_equal(losses, fn.value_batch(thetas))


def test_echo_peer_single_eval_matches():
    fn = SyntheticFunction("rosenbrock", 4)
    theta = np.array([0.3, -1.2, 0.7, 2.0])
    with ExternalObjective(4, command=_peer_command("rosenbrock", 4)) as peer:
        assert peer.eval(theta) == fn.value(theta)


def test_batched_probes_use_one_request(tmp_path):
    log = tmp_path / "requests.log"
    command = _peer_command("quadratic", 3, ("--log-requests", str(log)))
    with ExternalObjective(3, command=command) as peer:
        losses = peer.eval_batch(np.eye(3) * np.arange(1.0, 4.0)[:, None])
    lines = log.read_text().strip().splitlines()
    assert lines == ["3"]
    # losses ordered like the request rows
    expected = [0.5 * (i * i) for i in (1.0, 2.0, 3.0)]
    assert list(losses) == expected


def test_external_run_matches_builtin_trace():
    cfg = OptimizerConfig(
        learning_rate=1e-2, sharpness_radius=1e-5, estimator=EstimatorConfig(1e-3, 8)
    )
    builtin = run("zosa", SyntheticFunction("quadratic", 12).as_objective(), cfg, 10, 5)
    with ExternalObjective(
        12, command=_peer_command("quadratic", 12), optimum_value=0.0
    ) as peer:
        external = run("zosa", peer.as_objective(), cfg, 10, 5)
    assert builtin.failure is None and external.failure is None
    for rb, re_ in zip(builtin.rows, external.rows):
        assert abs(rb.loss - re_.loss) <= 1e-12
        assert abs(rb.gap - re_.gap) <= 1e-12
        assert abs(rb.sigma - re_.sigma) <= 1e-12
        assert rb.queries_cum == re_.queries_cum


def test_nan_loss_from_peer_halts_gracefully(tmp_path):
    body = (
        "for line in sys.stdin:\n"
        "    req = json.loads(line)\n"
        "    print(json.dumps({'id': req['id'], 'losses': [float('nan')] * len(req['thetas'])}))\n"
        "    sys.stdout.flush()\n"
    )
    command = _script_peer(tmp_path, body)
    with ExternalObjective(2, command=command) as peer:
        objective = peer.as_objective()
        with pytest.raises(NonFiniteLossError):
            from zosa import QueryCounter, evaluate

            evaluate(objective, np.zeros(2), QueryCounter())
    # through the harness: failure marker, no crash
    spec = RunSpec(
        optimizer_kind="fzoo",
        optimizer=OptimizerConfig(learning_rate=1e-2, estimator=EstimatorConfig(1e-3, 2)),
        objective=ObjectiveSpec(kind="external", dimension=2, command=tuple(command)),
        iterations=5,
        seeds=(1,),
        output_dir=str(tmp_path / "nan_run"),
    )
    summary = run_experiment(spec)
    assert summary["failures"] == 1
    assert "non-finite" in summary["per_seed"][0]["failure"]


def test_peer_error_response_raises_protocol_error(tmp_path):
    body = (
        "for line in sys.stdin:\n"
        "    req = json.loads(line)\n"
        "    print(json.dumps({'id': req['id'], 'error': 'model exploded'}))\n"
        "    sys.stdout.flush()\n"
    )
    with ExternalObjective(2, command=_script_peer(tmp_path, body)) as peer:
        with pytest.raises(ProtocolError, match="model exploded"):
            peer.eval(np.zeros(2))


def test_malformed_response_raises_protocol_error(tmp_path):
    body = "for line in sys.stdin:\n    print('not json')\n    sys.stdout.flush()\n"
    with ExternalObjective(2, command=_script_peer(tmp_path, body)) as peer:
        with pytest.raises(ProtocolError, match="malformed"):
            peer.eval(np.zeros(2))


def test_response_id_mismatch_raises(tmp_path):
    body = (
        "for line in sys.stdin:\n"
        "    req = json.loads(line)\n"
        "    print(json.dumps({'id': req['id'] + 1, 'losses': [0.0] * len(req['thetas'])}))\n"
        "    sys.stdout.flush()\n"
    )
    with ExternalObjective(2, command=_script_peer(tmp_path, body)) as peer:
        with pytest.raises(ProtocolError, match="id"):
            peer.eval(np.zeros(2))


def test_wrong_loss_count_raises(tmp_path):
    body = (
        "for line in sys.stdin:\n"
        "    req = json.loads(line)\n"
        "    print(json.dumps({'id': req['id'], 'losses': [0.0]}))\n"
        "    sys.stdout.flush()\n"
    )
    with ExternalObjective(3, command=_script_peer(tmp_path, body)) as peer:
        with pytest.raises(ProtocolError, match="expected 2 losses"):
            peer.eval_batch(np.zeros((2, 3)))


def test_timeout_raises_protocol_error(tmp_path):
    body = "import time\nfor line in sys.stdin:\n    time.sleep(5)\n"
    command = _script_peer(tmp_path, body)
    with ExternalObjective(2, command=command, timeout_s=0.3) as peer:
        with pytest.raises(ProtocolError, match="timed out"):
            peer.eval(np.zeros(2))


def test_dead_peer_raises_protocol_error(tmp_path):
    body = "sys.exit(0)\n"
    with ExternalObjective(2, command=_script_peer(tmp_path, body), timeout_s=2.0) as peer:
        with pytest.raises(ProtocolError):
            peer.eval(np.zeros(2))


class _PortCapture:
    def __init__(self):
        self.event = threading.Event()
        self.port = None

    def write(self, text):
        self.port = int(text.strip())
        self.event.set()

    def flush(self):
        pass


def test_tcp_transport_matches_builtin():
    fn = SyntheticFunction("levy", 5)
    capture = _PortCapture()
    server = threading.Thread(target=serve_tcp, args=(fn, 0, capture), daemon=True)
    server.start()
    assert capture.event.wait(5.0)
    thetas = np.random.default_rng(9).standard_normal((4, 5))
    with ExternalObjective(5, tcp=f"127.0.0.1:{capture.port}") as peer:
        losses = peer.eval_batch(thetas)
    assert np.array_equal(losses, fn.value_batch(thetas))
    server.join(timeout=5.0)


def test_open_objective_external_context(tmp_path):
    spec = ObjectiveSpec(
        kind="external",
        dimension=3,
        command=tuple(_peer_command("quadratic", 3)),
        optimum_value=0.0,
    )
    with open_objective(spec) as objective:
        assert objective.dimension == 3
        assert objective.fn(np.zeros(3)) == 0.0
