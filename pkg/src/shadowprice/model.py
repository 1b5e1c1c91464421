"""Market parameters of the Black-Scholes model with proportional costs.

The stock (ask) price is ``S_t = exp(sigma W_t + (mu - sigma^2/2) t)`` with
``S_0 = 1`` and a zero interest rate; the bid price is ``(1 - lam) S_t``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError

# relative tolerance for recognising theta == 1/2 and theta == 1
REGIME_RTOL = 1e-12


class Regime(enum.Enum):
    LOW_THETA = "LowTheta"    # 0 < theta < 1/2
    HALF = "Half"             # theta == 1/2
    MID_THETA = "MidTheta"    # 1/2 < theta < 1
    UNIT = "Unit"             # theta == 1
    HIGH_THETA = "HighTheta"  # theta > 1


def classify(theta: float) -> Regime:
    """Map a Merton proportion to its analytic regime."""
    if math.isclose(theta, 0.5, rel_tol=REGIME_RTOL, abs_tol=0.0):
        return Regime.HALF
    if math.isclose(theta, 1.0, rel_tol=REGIME_RTOL, abs_tol=0.0):
        return Regime.UNIT
    if theta < 0.5:
        return Regime.LOW_THETA
    if theta < 1.0:
        return Regime.MID_THETA
    return Regime.HIGH_THETA


@dataclass(frozen=True)
class MarketParams:
    """Validated ``(mu, sigma, lam)``; use :func:`validate_params` to build one."""

    mu: float
    sigma: float
    lam: float

    @property
    def theta(self) -> float:
        """Merton proportion ``mu / sigma^2``."""
        return self.mu / (self.sigma * self.sigma)

    @property
    def regime(self) -> Regime:
        return classify(self.theta)

    @property
    def frictionless_growth(self) -> float:
        return self.mu * self.mu / (2.0 * self.sigma * self.sigma)


def validate_params(mu: float, sigma: float, lam: float) -> MarketParams:
    """Check the standing assumptions and return a :class:`MarketParams`.

    Raises
    ------
    DomainError
        If any input is non-finite, ``sigma <= 0``, ``mu <= 0`` or
        ``lam`` is not in the open interval (0, 1).
    """
    try:
        mu, sigma, lam = float(mu), float(sigma), float(lam)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"market parameters must be real numbers: {exc}") from None
    for name, value in (("mu", mu), ("sigma", sigma), ("lambda", lam)):
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite, got {value!r}")
    if sigma <= 0.0:
        raise DomainError(f"sigma must be positive, got {sigma!r}")
    if mu <= 0.0:
        raise DomainError(f"mu must be positive, got {mu!r}")
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lambda must lie in (0, 1), got {lam!r}")
    return MarketParams(mu, sigma, lam)


def params_from_theta(theta: float, lam: float, sigma: float = 1.0) -> MarketParams:
    """Convenience constructor setting ``mu = theta * sigma^2``."""
    return validate_params(theta * sigma * sigma, sigma, lam)
