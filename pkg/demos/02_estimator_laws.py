"""Watch the estimator's statistical laws hold against closed forms.

Three laws, each checked by Monte Carlo against a prediction computed
without the estimator:

  * the spread of the probe losses satisfies E[sigma^2] = eps^2 ||grad L||^2
    (exactly on a quadratic),
  * the estimate's mean squared error is (d-1) ||grad L||^2 / m on a linear
    objective, and halves when the direction count doubles,
  * sigma^2 scales like eps^2 (slope-2 line in log-log) on a curved
    objective.

    python demos/02_estimator_laws.py
"""

import numpy as np

from zosa import (
    EstimatorConfig,
    SyntheticFunction,
    linear_objective,
    mse_law_study,
    sigma_law_study,
)

print("sigma law on the quadratic at theta = ones(10), eps = 1e-3, m = 32")
quadratic = SyntheticFunction("quadratic", 10).as_objective()
law = sigma_law_study(quadratic, EstimatorConfig(1e-3, 32), 10_000, 1, theta=np.ones(10))
print(f"  empirical mean sigma^2 = {law.empirical:.6e}")
print(f"  predicted eps^2*||grad||^2 = {law.predicted:.6e}")
print(f"  relative error = {law.relative_error:.3%}\n")

print("mse law on a linear objective, d = 20")
linear = linear_objective(np.ones(20))
for m in (5, 10, 20):
    law = mse_law_study(linear, EstimatorConfig(1e-3, m), 5_000, 2, theta=np.zeros(20))
    print(
        f"  m = {m:>3}: empirical MSE = {law.empirical:8.3f}, "
        f"predicted (d-1)||grad||^2/m = {law.predicted:8.3f}, "
        f"rel err = {law.relative_error:.3%}"
    )
print()

print("sigma^2 vs eps on the cubic (log-log slope should be 2)")
cubic = SyntheticFunction("cubic", 10).as_objective()
eps_values = [2e-3, 1e-3, 5e-4, 2.5e-4]
empiricals = []
for eps in eps_values:
    law = sigma_law_study(cubic, EstimatorConfig(eps, 16), 3_000, 3)
    empiricals.append(law.empirical)
    print(f"  eps = {eps:.1e}: mean sigma^2 = {law.empirical:.6e}")
slope = np.polyfit(np.log(eps_values), np.log(empiricals), 1)[0]
print(f"  fitted slope = {slope:.4f}")
