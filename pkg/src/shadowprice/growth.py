"""Optimal growth rate and the stationary law of the reflected ratio ``S/m``."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, QuadratureError, UnsupportedRegime
from .model import Regime
from .shadow import ShadowTransform
from .solver import FrictionSolution

QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-12
NEAR_HALF = 1e-6


@dataclass(frozen=True)
class GrowthReport:
    delta_closed: float
    delta_quadrature: float
    delta_frictionless: float
    stationary_normalizer: float

    @property
    def relative_gap(self) -> float:
        return abs(self.delta_closed - self.delta_quadrature) / self.delta_frictionless


def _normalizer(sol: FrictionSolution) -> float:
    theta, sb = sol.theta, sol.s_bar
    if sol.regime is Regime.HALF:
        return 1.0 / math.log(sb)
    e = 2.0 * theta - 1.0
    if theta < 1.0:
        return e / math.expm1(e * math.log(sb))
    return e / -math.expm1(e * math.log(sb))


def stationary_density(s, sol: FrictionSolution):
    """Density of the stationary law of ``S/m`` on the reflection domain."""
    if sol.degenerate:
        raise UnsupportedRegime("S/m has no stationary law when theta = 1")
    s = np.asarray(s, dtype=float)
    lo, hi = sol.domain
    if np.any(s < lo * (1 - 1e-12)) or np.any(s > hi * (1 + 1e-12)) or np.any(np.isnan(s)):
        raise DomainError(f"ratio outside the domain [{lo!r}, {hi!r}]")
    out = _normalizer(sol) * s ** (2.0 * sol.theta - 2.0)
    return float(out) if out.ndim == 0 else out


def stationary_cdf(s, sol: FrictionSolution):
    """Distribution function of the stationary law; used for histogram checks."""
    lo, _ = sol.domain
    s = np.asarray(s, dtype=float)
    if sol.regime is Regime.HALF:
        out = np.log(s / lo) / math.log(sol.s_bar)
    else:
        e = 2.0 * sol.theta - 1.0
        out = _normalizer(sol) * (s ** e - lo ** e) / e
    return float(out) if out.ndim == 0 else out


def growth_rate_closed(sol: FrictionSolution, sigma: float) -> float:
    """Optimal long-run growth rate from the closed-form expression."""
    s2 = sigma * sigma
    if sol.degenerate:
        return s2 / 2.0
    theta, c, sb = sol.theta, sol.c, sol.s_bar
    if not (math.isfinite(c) and math.isfinite(sb) and sb > 0.0):
        raise UnsupportedRegime("malformed friction solution")
    if sol.regime is Regime.HALF:
        return s2 / (2.0 * (1.0 + c) * (1.0 + c - math.log(sb)))
    if abs(2.0 * theta - 1.0) < NEAR_HALF:
        warnings.warn("theta is within 1e-6 of 1/2; the general closed form is ill-conditioned, "
                      "compare with the theta = 1/2 branch", RuntimeWarning, stacklevel=2)
    k = -2.0 - c + 2.0 * theta * (1.0 + c)
    return (2.0 * theta - 1.0) * s2 * sb / (2.0 * (1.0 + c) * (sb + k * sb ** (2.0 * theta)))


def growth_integrand(s, sol: FrictionSolution, sigma: float, t: ShadowTransform | None = None):
    """``drift^2 / (2 vol^2)`` of the shadow price at ratio ``s``."""
    t = t or ShadowTransform(sol)
    gp = np.asarray(t.g_prime(s))
    g = np.asarray(t.g(s))
    return sigma * sigma * gp * gp * np.asarray(s) ** 2 / (2.0 * (sol.c + g) ** 2)


def _quad(f, a, b):
    val, err, info = integrate.quad(f, a, b, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL,
                                    limit=200, full_output=1)[:3]
    if err > max(QUAD_EPSABS, QUAD_EPSREL * abs(val)) * 10:
        raise QuadratureError(f"quadrature error estimate {err:.3e} too large")
    return val


def growth_rate_quadrature(sol: FrictionSolution, sigma: float) -> float:
    """Growth rate as the stationary average of the local frictionless growth rate."""
    if sol.degenerate:
        return sigma * sigma / 2.0
    t = ShadowTransform(sol)
    a, b = sol.domain
    scale = sol.params.frictionless_growth
    # integrate the normalised integrand so the absolute tolerance is meaningful
    f = lambda s: float(growth_integrand(s, sol, sigma, t)) * stationary_density(s, sol) / scale  # noqa: E731
    return _quad(f, a, b) * scale


def stationary_mass(sol: FrictionSolution) -> float:
    """Numerical integral of the stationary density over the domain (should be 1)."""
    a, b = sol.domain
    return _quad(lambda s: stationary_density(s, sol), a, b)


def growth_report(sol: FrictionSolution) -> GrowthReport:
    sigma = sol.params.sigma
    return GrowthReport(
        delta_closed=growth_rate_closed(sol, sigma),
        delta_quadrature=growth_rate_quadrature(sol, sigma),
        delta_frictionless=sol.params.frictionless_growth,
        stationary_normalizer=_normalizer(sol) if not sol.degenerate else math.nan,
    )
