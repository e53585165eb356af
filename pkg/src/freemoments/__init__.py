"""Exact and numerical moment machinery for free additive convolutions of
semicircle and uniform laws, and for the free log-normal spectral law."""
from __future__ import annotations

from .exactcomb import (
    IdentityCheck,
    StirlingTable,
    alternating_binomial_sum_check,
    binomial,
    falling_factorial,
    generalized_binomial,
    rising_factorial,
    stirling_first,
    stirling_via_log_series,
    verify_stirling_identity,
)
from .freeconv import (
    BranchError,
    DensityGrid,
    SubordinationError,
    SupportInterval,
    cauchy_semicircle,
    cauchy_uniform,
    density_grid,
    detect_support,
    exp_pushforward_density,
    expansion_moments,
    free_lognormal_support,
    free_sum_cauchy,
    grid_moments,
)
from .measures import (
    Dirac,
    ExpImage,
    FreeLogNormal,
    FreeSum,
    MeasureSpec,
    Scaled,
    Semicircle,
    Uniform,
)
from .moments import (
    MomentAgreement,
    additive_mgf,
    additive_mgf_series,
    free_lognormal_moment,
    free_lognormal_moment_alpha,
    free_lognormal_moment_alpha_series,
    mgf,
    moment,
    moment_polynomial,
    moment_polynomials_from_recursion,
    semicircle_uniform_moment,
    verify_exp_image_moments,
)
from .ratpoly import RationalPolynomial
from .rmtlab import (
    AdditiveModelConfig,
    ConvergenceReport,
    EmpiricalSpectrum,
    MomentComparison,
    MultiplicativeModelConfig,
    PositivityError,
    additive_drift,
    additive_matrix,
    convergence_report,
    empirical_moments,
    sample_additive,
    sample_multiplicative,
)
from .specfun import (
    DEFAULT_POLICY,
    SeriesConvergenceError,
    SeriesPolicy,
    beta_integral_exact,
    euler_integral_1f1,
    kummer_1f1,
    kummer_transform_check,
    laguerre,
)

__version__ = "0.1.0"

__all__ = [
    "IdentityCheck",
    "StirlingTable",
    "alternating_binomial_sum_check",
    "binomial",
    "falling_factorial",
    "generalized_binomial",
    "rising_factorial",
    "stirling_first",
    "stirling_via_log_series",
    "verify_stirling_identity",
    "BranchError",
    "DensityGrid",
    "SubordinationError",
    "SupportInterval",
    "cauchy_semicircle",
    "cauchy_uniform",
    "density_grid",
    "detect_support",
    "exp_pushforward_density",
    "expansion_moments",
    "free_lognormal_support",
    "free_sum_cauchy",
    "grid_moments",
    "Dirac",
    "ExpImage",
    "FreeLogNormal",
    "FreeSum",
    "MeasureSpec",
    "Scaled",
    "Semicircle",
    "Uniform",
    "MomentAgreement",
    "additive_mgf",
    "additive_mgf_series",
    "free_lognormal_moment",
    "free_lognormal_moment_alpha",
    "free_lognormal_moment_alpha_series",
    "mgf",
    "moment",
    "moment_polynomial",
    "moment_polynomials_from_recursion",
    "semicircle_uniform_moment",
    "verify_exp_image_moments",
    "RationalPolynomial",
    "AdditiveModelConfig",
    "ConvergenceReport",
    "EmpiricalSpectrum",
    "MomentComparison",
    "MultiplicativeModelConfig",
    "PositivityError",
    "additive_drift",
    "additive_matrix",
    "convergence_report",
    "empirical_moments",
    "sample_additive",
    "sample_multiplicative",
    "SeriesConvergenceError",
    "SeriesPolicy",
    "DEFAULT_POLICY",
    "beta_integral_exact",
    "euler_integral_1f1",
    "kummer_1f1",
    "kummer_transform_check",
    "laguerre",
    "__version__",
]
