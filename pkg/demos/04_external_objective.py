"""Optimize a loss served by another process.

Spawns the reference peer (a child process that evaluates the Rosenbrock
function over the JSON-lines protocol), runs the sharpness-aware optimizer
against it, and shows that the trace matches an in-process run bit for bit.
Swap the command for anything that speaks the protocol -- the optimizer
never knows the difference.

    python demos/04_external_objective.py
"""

import sys

from zosa import (
    EstimatorConfig,
    ExternalObjective,
    OptimizerConfig,
    SyntheticFunction,
    run,
)

DIMENSION = 30
COMMAND = [
    sys.executable, "-m", "zosa.peer",
    "--function", "rosenbrock", "--dimension", str(DIMENSION),
]

config = OptimizerConfig(
    learning_rate=1e-2,
    sharpness_radius=1e-5,
    estimator=EstimatorConfig(epsilon=1e-3, num_directions=16),
)

print("running against the child-process peer:", " ".join(COMMAND))
with ExternalObjective(DIMENSION, command=COMMAND, optimum_value=0.0) as peer:
    remote = run("zosa", peer.as_objective(), config, 200, seed=7)

local = run("zosa", SyntheticFunction("rosenbrock", DIMENSION).as_objective(), config, 200, seed=7)

print(f"{'iter':>6} {'remote gap':>14} {'local gap':>14}")
for row_remote, row_local in zip(remote.rows[::40], local.rows[::40]):
    print(f"{row_remote.iter:>6} {row_remote.gap:>14.6e} {row_local.gap:>14.6e}")

worst = max(abs(a.gap - b.gap) for a, b in zip(remote.rows, local.rows))
print(f"\nlargest per-iteration difference: {worst:.2e}")
print(f"remote queries counted: {remote.queries} (same fixed per-step cost as local)")
