"""Hecke L-functions on the critical line, Gram points and mean values of Z at Gram points."""
from .coeffs import (
    FourierCoefficients,
    load_coefficients,
    save_coefficients,
    tau_coefficients,
    verify_coefficients,
)
from .errors import CoefficientError, ConfigurationError, DomainError, GramlabError, NumericError
from .gram import GramPoint, gram_point, gram_points, gram_points_in, v0_and_tmin
from .gramlaw import (
    GramSumReport,
    gram_interval_scan,
    s_of_t,
    unweighted_gram_sum,
    weight_omega,
    weighted_gram_sum,
)
from .lfunc import (
    EvalResult,
    LContext,
    delta_pow,
    l_direct,
    l_eval,
    l_values,
    log_delta,
    make_context,
    theta,
    theta_prime,
    z_eval,
    z_values,
)
from .verify import VerificationRecord, afe_crosscheck, contour_residue_check

__version__ = "0.1.0"

__all__ = [
    "GramPoint",
    "gram_point",
    "gram_points",
    "gram_points_in",
    "v0_and_tmin",
    "FourierCoefficients",
    "load_coefficients",
    "save_coefficients",
    "tau_coefficients",
    "verify_coefficients",
    "CoefficientError",
    "ConfigurationError",
    "DomainError",
    "GramlabError",
    "NumericError",
    "GramSumReport",
    "gram_interval_scan",
    "s_of_t",
    "unweighted_gram_sum",
    "weight_omega",
    "weighted_gram_sum",
    "EvalResult",
    "LContext",
    "delta_pow",
    "l_direct",
    "l_eval",
    "l_values",
    "log_delta",
    "make_context",
    "theta",
    "theta_prime",
    "z_eval",
    "z_values",
    "VerificationRecord",
    "afe_crosscheck",
    "contour_residue_check",
]
