"""Poverty indices with estimated (relative) poverty lines.

Point estimates, asymptotic covariances that account for the estimated
line, one- and multi-index two-population tests, and Monte Carlo studies.
"""
__version__ = "0.1.0"

from .distributions import Exponential, Lognormal, parse_distribution
from .empirical import Sample, kde_density, silverman_bandwidth
from .errors import (
    DegenerateError,
    DomainError,
    PovlineError,
    QuadratureError,
    SingularCovarianceError,
    ValidationError,
)
from .estimation import EstimateReport, a_factor, j_fixed, j_relative, j_theoretical
from .inference import proportionality_test, wald_test
from .lines import FixedLine, MeanLine, QuantileLine, parse_line
from .measures import (
    CustomMeasure,
    fgt,
    kakwani,
    parse_measure,
    register_measure,
    sen,
    shorrocks,
    watts,
)
from .simulation import StudyConfig, run_normality_study, run_size_study
from .variance import delta_hat, gamma_hat, gamma_matrix, sigma_hat, variance_components

__all__ = [
    "__version__",
    "Exponential", "Lognormal", "parse_distribution",
    "Sample", "kde_density", "silverman_bandwidth",
    "PovlineError", "ValidationError", "DomainError", "DegenerateError",
    "SingularCovarianceError", "QuadratureError",
    "EstimateReport", "a_factor", "j_fixed", "j_relative", "j_theoretical",
    "proportionality_test", "wald_test",
    "FixedLine", "MeanLine", "QuantileLine", "parse_line",
    "CustomMeasure", "fgt", "kakwani", "parse_measure", "register_measure",
    "sen", "shorrocks", "watts",
    "StudyConfig", "run_normality_study", "run_size_study",
    "delta_hat", "gamma_hat", "gamma_matrix", "sigma_hat", "variance_components",
]
