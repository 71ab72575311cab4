"""Regenerate the golden fixtures consumed by the plotkit tests.

Run from the repository root with the zosa package installed:

    python plotkit/testdata/generate.py

Produces small but real harness outputs: three convergence experiments
(one per optimizer, 3 seeds each), four alignment reports, and the summary
files the query-compare chart reads.
"""

import os
import shutil

HERE = os.path.dirname(os.path.abspath(__file__))
GOLDEN = os.path.join(HERE, "golden")

from zosa.config import ObjectiveSpec, RunSpec
from zosa.estimators import EstimatorConfig
from zosa.experiment import run_experiment, validate
from zosa.optimizers import OptimizerConfig


def main() -> None:
    shutil.rmtree(GOLDEN, ignore_errors=True)
    # run from testdata/ with relative output dirs so the committed trace
    # headers carry portable paths
    os.chdir(HERE)
    convergence = os.path.join("golden", "convergence")
    for kind in ("zosa", "fzoo", "zo_rmsprop"):
        adaptive = kind in ("zosa", "fzoo")
        spec = RunSpec(
            optimizer_kind=kind,
            optimizer=OptimizerConfig(
                learning_rate=1e-2 if adaptive else 1e-3,
                sharpness_radius=1e-5 if kind == "zosa" else 0.0,
                estimator=EstimatorConfig(
                    epsilon=1e-3 if adaptive else 5e-3, num_directions=8
                ),
            ),
            objective=ObjectiveSpec(kind="quadratic", dimension=20),
            iterations=400,
            seeds=(1, 2, 3),
            output_dir=os.path.join(convergence, kind),
        )
        run_experiment(spec)

    alignment = os.path.join("golden", "alignment")
    for kind in ("quadratic", "cubic", "levy", "rosenbrock"):
        validate(
            "alignment",
            out_path=os.path.join(alignment, f"alignment_{kind}.json"),
            function=kind,
            dimension=20,
            num_directions=200,
            trials=30,
        )
    print(f"golden fixtures written under {GOLDEN}")


if __name__ == "__main__":
    main()
