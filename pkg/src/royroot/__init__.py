"""royroot: null distribution of Roy's largest-root statistic.

Exact CDF and quantiles of the largest eigenvalue of real and complex
multivariate beta matrices, Tracy-Widom based closed-form approximations,
and a Monte Carlo oracle for validation.
"""

from .approx import (
    SHIFTED_GAMMA,
    ShiftedGammaConstants,
    TwApproxParams,
    approx_cdf,
    approx_cdf_from_beta,
    approx_quantile,
    approx_quantile_from_beta,
    tw1_cdf_approx,
    tw1_quantile_approx,
    tw_params,
    tw_params_from_beta,
)
from .errors import (
    ApproximationValidityWarning,
    ConvergenceError,
    DomainError,
    PfaffianSignError,
    PrecisionError,
    RoyRootError,
)
from .exact import (
    Diagnostics,
    DistributionResult,
    SkewPfaffianMatrix,
    build_pfaffian_matrix,
    exact_cdf,
    exact_quantile,
    log_norm_constant,
    log_pfaffian,
    script_e,
)
from .montecarlo import EmpiricalCdf, McConfig, empirical_cdf, sample_theta1
from .params import (
    BetaParams,
    FieldKind,
    ManovaDims,
    beta_to_manova,
    manova_to_beta,
)
from .special import (
    DEFAULT_ACCURACY,
    AccuracySpec,
    inc_beta_lower,
    log_gamma,
    reg_inc_gamma_p,
    reg_inc_gamma_p_inv,
)

__version__ = "0.1.0"

__all__ = [
    "ApproximationValidityWarning",
    "AccuracySpec",
    "BetaParams",
    "ConvergenceError",
    "DEFAULT_ACCURACY",
    "Diagnostics",
    "DistributionResult",
    "DomainError",
    "EmpiricalCdf",
    "FieldKind",
    "ManovaDims",
    "McConfig",
    "PfaffianSignError",
    "PrecisionError",
    "RoyRootError",
    "SHIFTED_GAMMA",
    "ShiftedGammaConstants",
    "SkewPfaffianMatrix",
    "TwApproxParams",
    "approx_cdf",
    "approx_cdf_from_beta",
    "approx_quantile",
    "approx_quantile_from_beta",
    "beta_to_manova",
    "build_pfaffian_matrix",
    "empirical_cdf",
    "exact_cdf",
    "exact_quantile",
    "inc_beta_lower",
    "log_gamma",
    "log_norm_constant",
    "log_pfaffian",
    "manova_to_beta",
    "reg_inc_gamma_p",
    "reg_inc_gamma_p_inv",
    "sample_theta1",
    "script_e",
    "tw1_cdf_approx",
    "tw1_quantile_approx",
    "tw_params",
    "tw_params_from_beta",
]
