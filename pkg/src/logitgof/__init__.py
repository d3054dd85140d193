"""Goodness-of-fit testing for logistic regression with exact Monte-Carlo
P-values.

The test statistics live in `statistics`, maximum-likelihood fitting in
`fitting`, the simulation engine in `montecarlo`, the small-n enumeration
oracle in `exact` and experiment orchestration in `experiment`.
"""

from .datamodel import (
    Dataset,
    FittedModel,
    GroupingScheme,
    ModelSpec,
    Ordering,
    OrderingPolicy,
    default_grouping,
    ensure_valid,
    validate,
)
from .datasets import FINNEY_DEPENDENT, finney
from .dataio import export_csv, inject_uniform_covariates, load_csv
from .errors import ConfigError, DataError, LogitgofError, NumericalError
from .exact import MAX_EXACT_N, ExactPValue, exact_pvalue, exact_pvalues
from .experiment import (
    DEFAULT_NUM_SIMULATIONS,
    ExperimentConfig,
    Report,
    build_plan,
    emit_report,
    load_config,
    report_from_json,
    run_experiment,
)
from .fitting import DEFAULT_FIT_CONFIG, FitConfig, design_matrix, fit, residuals
from .montecarlo import (
    PValueEstimate,
    SimulationPlan,
    draw_outcomes,
    estimate_pvalues,
    observed_statistics,
    run_one_simulation,
)
from .statistics import (
    StatisticKind,
    deviance,
    euclidean_sq,
    evaluate_batch,
    freeman_tukey,
    half_abs_sum,
    hosmer_lemeshow,
    ks_statistic,
    kuiper_statistic,
    make_ordering,
    parse_statistics,
    pearson_chi2,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DEFAULT_FIT_CONFIG",
    "DEFAULT_NUM_SIMULATIONS",
    "DataError",
    "Dataset",
    "ExactPValue",
    "ExperimentConfig",
    "FINNEY_DEPENDENT",
    "FitConfig",
    "FittedModel",
    "GroupingScheme",
    "LogitgofError",
    "MAX_EXACT_N",
    "ModelSpec",
    "NumericalError",
    "Ordering",
    "OrderingPolicy",
    "PValueEstimate",
    "Report",
    "SimulationPlan",
    "StatisticKind",
    "build_plan",
    "default_grouping",
    "design_matrix",
    "deviance",
    "draw_outcomes",
    "emit_report",
    "ensure_valid",
    "estimate_pvalues",
    "euclidean_sq",
    "evaluate_batch",
    "exact_pvalue",
    "exact_pvalues",
    "export_csv",
    "finney",
    "fit",
    "freeman_tukey",
    "half_abs_sum",
    "hosmer_lemeshow",
    "inject_uniform_covariates",
    "ks_statistic",
    "kuiper_statistic",
    "load_config",
    "load_csv",
    "make_ordering",
    "observed_statistics",
    "parse_statistics",
    "pearson_chi2",
    "report_from_json",
    "residuals",
    "run_experiment",
    "run_one_simulation",
    "validate",
    "__version__",
]
