"""Monte Carlo Greeks for a GMWB variable annuity under Heston-CIR dynamics."""

from ._core import (
    ConfigError,
    DegenerateVolatility,
    InsufficientSamples,
    ModelParams,
    NonPositiveDefinite,
    UnsupportedPayoff,
    bs_call_delta,
    bs_call_gamma,
    bs_call_price,
    bs_digital_delta,
    builtin_case,
    cholesky_factor,
    clustered_mean_se,
    lrm_delta_weight,
    lrm_gamma_weight,
    mean_se,
    run_case,
    run_case_csv,
    survival_curve,
    validate,
)

__version__ = "0.1.0"
