"""Log-optimal investment with proportional transaction costs via shadow prices."""
from .asymptotics import (Boundaries, evaluate, expand_ansatz, expand_boundaries, expand_c,
                          optimal_truncation, expand_growth, expand_midprice, expand_s_bar,
                          truncation_errors)
from .errors import (ConvergenceError, DomainError, QuadratureError, ShadowPriceError,
                     SimulationError, UnsupportedRegime)
from .growth import (GrowthReport, growth_rate_closed, growth_rate_quadrature, growth_report,
                     stationary_cdf, stationary_density)
from .model import MarketParams, Regime, classify, params_from_theta, validate_params
from .series import FracSeries, lagrange_invert
from .shadow import ShadowTransform
from .simulate import PathConfig, PathRecord, SimSummary, simulate_path, simulate_paths
from .solver import (FrictionSolution, admissibility_margin, friction_gap, scan_lambda0,
                     solve, solve_c)

__version__ = "0.1.0"

__all__ = [
    "Boundaries", "ConvergenceError", "DomainError", "FracSeries", "FrictionSolution",
    "GrowthReport", "MarketParams", "PathConfig", "PathRecord", "QuadratureError", "Regime",
    "ShadowPriceError", "ShadowTransform", "SimSummary", "SimulationError", "UnsupportedRegime",
    "admissibility_margin", "classify", "optimal_truncation", "evaluate", "expand_ansatz", "expand_boundaries",
    "expand_c", "expand_growth", "expand_midprice", "expand_s_bar", "friction_gap",
    "growth_rate_closed", "growth_rate_quadrature", "growth_report", "lagrange_invert",
    "params_from_theta", "scan_lambda0", "simulate_path", "simulate_paths", "solve", "solve_c",
    "stationary_cdf", "stationary_density", "truncation_errors", "validate_params",
]
