"""Race the adaptive optimizers against the two-sided baselines.

Runs every optimizer on the same quadratic bowl with the desk-scale defaults
and prints how far each one gets on a matched query budget. The adaptive
pair (zosa, fzoo) normalizes its step size by the measured loss spread, so
it keeps making progress as the bowl flattens; the fixed-rate baselines slow
down long before that.

    python demos/01_convergence_comparison.py
"""

from zosa import EstimatorConfig, OptimizerConfig, SyntheticFunction, run

DIMENSION = 100
BUDGET = 60_000
SEEDS = (1, 2, 3)

objective = SyntheticFunction("quadratic", DIMENSION).as_objective()

print(f"quadratic bowl, d={DIMENSION}, query budget {BUDGET} per run, {len(SEEDS)} seeds")
print(f"{'optimizer':<14} {'median initial gap':>20} {'median final gap':>18} {'queries':>9}")

for kind in ("zosa", "fzoo", "zo_sgd", "zo_sign_sgd", "zo_adamm", "zo_rmsprop"):
    adaptive = kind in ("zosa", "fzoo")
    config = OptimizerConfig(
        learning_rate=1e-2 if adaptive else 1e-3,
        sharpness_radius=1e-5 if kind == "zosa" else 0.0,
        estimator=EstimatorConfig(
            epsilon=1e-3 if adaptive else 5e-3,
            num_directions=32,
        ),
    )
    initial, final, queries = [], [], 0
    for seed in SEEDS:
        result = run(kind, objective, config, 100_000, seed, query_budget=BUDGET)
        initial.append(result.rows[0].gap)
        final.append(result.rows[-1].gap)
        queries = result.queries
    print(
        f"{kind:<14} {sorted(initial)[1]:>20.4e} {sorted(final)[1]:>18.4e} {queries:>9}"
    )

print()
print("zosa spends twice the queries per step of fzoo (two estimates), yet both")
print("collapse the gap by orders of magnitude where the fixed-rate family stalls.")
