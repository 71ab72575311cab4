"""Zero-order sharpness-aware optimization toolkit.

Gradient-free optimizers built on randomized finite-difference estimates,
with loss-variance-adaptive step sizes and a sharpness-seeking double
estimate; plus baselines, synthetic benchmarks, statistical-law diagnostics,
and a reproducible experiment harness.
"""

from .benchmarks import (
    FUNCTION_KINDS,
    SyntheticFunction,
    eval_function,
    eval_gradient,
    optimality_gap,
)
from .config import ObjectiveSpec, RunSpec, load_run_spec, open_objective, parse_run_spec
from .core import (
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
from .diagnostics import (
    AlignmentReport,
    GradientAlignmentReport,
    LawReport,
    SamAlignmentReport,
    cosine_similarity,
    gradient_alignment_study,
    linear_objective,
    mse_law_study,
    predicted_alignment,
    sam_alignment_study,
    sigma_law_study,
)
from .estimators import (
    EstimateResult,
    EstimatorConfig,
    classical_two_sided_estimate,
    loss_std,
    one_sided_estimate,
)
from .experiment import compare, run_experiment, sweep, validate
from .external import ExternalObjective, ProtocolError
from .optimizers import (
    OPTIMIZER_KINDS,
    DivergenceError,
    OptimizerConfig,
    OptimizerState,
    RunResult,
    StepReport,
    TraceRow,
    fzoo_step,
    per_step_queries,
    run,
    sam_offset,
    zo_adamm_step,
    zo_rmsprop_step,
    zo_sgd_step,
    zo_sign_sgd_step,
    zosa_step,
)

__version__ = "0.1.0"
