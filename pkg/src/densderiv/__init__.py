"""Kernel estimation of univariate density derivatives with data-driven bandwidths."""

from .errors import (
    BoundaryMinimumWarning,
    DataError,
    DegenerateSampleError,
    EmptyInputError,
    NonFiniteValueError,
    NonpositiveBandwidthError,
    OrderTooHighError,
    ParseError,
)
from .estimator import DensityDerivativeEstimate, Sample, default_grid, dkde, summarize
from .kernels import (
    Kernel,
    KernelMoments,
    hermite_polynomial,
    kernel_convolution,
    kernel_derivative,
    kernel_moment,
    kernel_moments,
    kernel_roughness,
)
from .mixture import integrated_squared_error, sample_bimodal, true_derivative
from .optimize import SearchInterval, golden_section
from .selectors import (
    METHODS,
    ScoreProfile,
    SelectorResult,
    bcv_score,
    ccv_score,
    h_amise,
    h_bcv,
    h_ccv,
    h_mcv,
    h_mlcv,
    h_tcv,
    h_ucv,
    mcv_score,
    mlcv_score,
    oversmoothing_bandwidth,
    score_profile,
    select_bandwidth,
    tcv_score,
    ucv_score,
)

__version__ = "0.1.0"

__all__ = [
    "DensityDerivativeEstimate",
    "Sample",
    "default_grid",
    "dkde",
    "summarize",
    "integrated_squared_error",
    "sample_bimodal",
    "true_derivative",
    "SearchInterval",
    "golden_section",
    "BoundaryMinimumWarning",
    "DataError",
    "DegenerateSampleError",
    "EmptyInputError",
    "NonFiniteValueError",
    "NonpositiveBandwidthError",
    "OrderTooHighError",
    "ParseError",
    "Kernel",
    "KernelMoments",
    "hermite_polynomial",
    "kernel_convolution",
    "kernel_derivative",
    "kernel_moment",
    "kernel_moments",
    "kernel_roughness",
    "METHODS",
    "ScoreProfile",
    "SelectorResult",
    "bcv_score",
    "ccv_score",
    "h_amise",
    "h_bcv",
    "h_ccv",
    "h_mcv",
    "h_mlcv",
    "h_tcv",
    "h_ucv",
    "mcv_score",
    "mlcv_score",
    "oversmoothing_bandwidth",
    "score_profile",
    "select_bandwidth",
    "tcv_score",
    "ucv_score",
]
