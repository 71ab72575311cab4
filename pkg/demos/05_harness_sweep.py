"""Drive the experiment harness end to end: sweep, leaderboard, compare.

Builds a run spec in code, sweeps the learning rate and sharpness radius on
the Levy function, and prints the leaderboard. Everything lands in
demo_output/ as the same CSV traces and JSON summaries the CLI produces, so
the plotkit figures can be rendered from it afterwards:

    python demos/05_harness_sweep.py
    zosa compare --traces demo_output/sweep/p*
"""

from zosa.config import ObjectiveSpec, RunSpec
from zosa.estimators import EstimatorConfig
from zosa.experiment import sweep
from zosa.optimizers import OptimizerConfig

base = RunSpec(
    optimizer_kind="zosa",
    optimizer=OptimizerConfig(
        learning_rate=1e-2,
        sharpness_radius=1e-5,
        estimator=EstimatorConfig(epsilon=1e-3, num_directions=16),
    ),
    objective=ObjectiveSpec(kind="levy", dimension=50),
    iterations=400,
    seeds=(1, 2, 3),
    output_dir="demo_output/sweep",
)

result = sweep(
    base,
    {"learning_rate": [3e-2, 1e-2, 3e-3], "num_directions": [8, 32]},
    max_workers=4,
)

print(f"{result['points']} sweep points, ranked by mean final gap:\n")
print(f"{'rank':>4}  {'point':<44} {'mean gap':>12} {'std':>10}")
for rank, entry in enumerate(result["leaderboard"], start=1):
    print(
        f"{rank:>4}  {entry['point']:<44} "
        f"{entry['mean_final_gap']:>12.4e} {entry['std_final_gap']:>10.2e}"
    )

print("\ntraces and summaries are under demo_output/sweep/<point>/")
