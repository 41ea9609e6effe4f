from ._stabsim import (
    Configuration,
    Space,
    bound_rhs,
    identity_check_json,
    kolmogorov_distance,
    normal_cdf,
    normal_quantile,
    run_experiment_json,
    sample_binomial,
    sample_poisson,
    scores,
    statistic,
    wasserstein_distance,
)

__all__ = [
    "Configuration",
    "Space",
    "bound_rhs",
    "identity_check_json",
    "kolmogorov_distance",
    "normal_cdf",
    "normal_quantile",
    "run_experiment_json",
    "sample_binomial",
    "sample_poisson",
    "scores",
    "statistic",
    "wasserstein_distance",
]
