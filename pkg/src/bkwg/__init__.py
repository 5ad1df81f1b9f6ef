"""Beta-Kumaraswamy-G distribution family.

A library and command line tool for the four-shape-parameter family
built by passing a baseline distribution G through a Kumaraswamy layer
and then a beta layer.  Provides exact density, distribution, hazard,
quantile and sampling routines over ten pluggable baselines, series
expansions for moments and entropies, and maximum-likelihood and
method-of-moments fitting with model comparison by AIC.
"""

from .specialfn import (
    Tolerance,
    ConvergenceError,
    log_beta,
    reg_inc_beta,
    inv_reg_inc_beta,
    beta_quantile_series,
    digamma,
    trigamma,
)
from .baseline import (
    BaselineFamily,
    BaselineParams,
    baseline_cdf,
    baseline_pdf,
    baseline_logpdf,
    baseline_quantile,
)
from .core import (
    BKwParams,
    ShapeReport,
    pdf,
    logpdf,
    cdf,
    sf,
    hrf,
    rhrf,
    chrf,
    quantile,
    sample,
    bowley_skewness,
    moors_kurtosis,
    critical_points,
)
from .series import (
    SeriesCoeffs,
    beta_prime_coeffs,
    eta_coeffs,
    mu_coeffs,
    lambda_pq_coeffs,
    pwm,
    moment,
    order_stat_pdf,
    order_stat_moment,
    mgf,
    renyi_entropy,
)
from .estimation import (
    Dataset,
    FitResult,
    ModelSpec,
    log_likelihood,
    score,
    fit_mle,
    observed_info,
    wald_ci,
    aic,
    mom_residual,
    fit_mom,
)

__version__ = "0.1.0"

__all__ = [
    "Tolerance",
    "ConvergenceError",
    "log_beta",
    "reg_inc_beta",
    "inv_reg_inc_beta",
    "beta_quantile_series",
    "digamma",
    "trigamma",
    "BaselineFamily",
    "BaselineParams",
    "baseline_cdf",
    "baseline_pdf",
    "baseline_logpdf",
    "baseline_quantile",
    "BKwParams",
    "ShapeReport",
    "pdf",
    "logpdf",
    "cdf",
    "sf",
    "hrf",
    "rhrf",
    "chrf",
    "quantile",
    "sample",
    "bowley_skewness",
    "moors_kurtosis",
    "critical_points",
    "SeriesCoeffs",
    "beta_prime_coeffs",
    "eta_coeffs",
    "mu_coeffs",
    "lambda_pq_coeffs",
    "pwm",
    "moment",
    "order_stat_pdf",
    "order_stat_moment",
    "mgf",
    "renyi_entropy",
    "Dataset",
    "FitResult",
    "ModelSpec",
    "log_likelihood",
    "score",
    "fit_mle",
    "observed_info",
    "wald_ci",
    "aic",
    "mom_residual",
    "fit_mom",
    "__version__",
]
