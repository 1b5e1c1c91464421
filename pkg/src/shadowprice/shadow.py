"""The shadow-price transform ``g`` and the resulting shadow price dynamics.

``g`` maps the ratio ``S/m`` to ``S_tilde/m``.  It solves

    g'' = 2 g'^2 / (c + g) - 2 theta g' / s

with ``g(1) = g'(1) = 1`` and smooth pasting ``g(s_bar) = (1-lam) s_bar``,
``g'(s_bar) = 1 - lam`` at the other end of the domain.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError
from .model import Regime
from .solver import FrictionSolution

DOMAIN_SLACK = 1e-12


class ShadowTransform:
    """Closed-form ``g``, ``g'`` and ``g''`` bound to a solved ``(c, s_bar)``.

    All evaluators accept scalars or arrays.  Points within a relative
    slack of ``1e-12`` outside the domain are clamped onto it; anything
    further out raises :class:`DomainError`.
    """

    def __init__(self, sol: FrictionSolution):
        self.sol = sol
        theta, c = sol.theta, sol.c
        self.theta = theta
        self.c = c
        self.domain = sol.domain
        if sol.degenerate:
            self.kind = "identity"
        elif sol.regime is Regime.HALF:
            self.kind = "log"
        else:
            self.kind = "power"
            self._e = 2.0 * theta - 1.0
            d = c - (1.0 - theta) / theta            # factors written without cancellation
            self._a = 1.0 + 2.0 * theta * d
            self._b = (1.0 - theta) / theta - self._e * d
            self._k = (self._e * (1.0 + c)) ** 2

    def __repr__(self):
        return f"ShadowTransform(theta={self.theta!r}, c={self.c!r}, s_bar={self.sol.s_bar!r})"

    def _clip(self, s):
        s = np.asarray(s, dtype=float)
        lo, hi = self.domain
        if np.any(s < lo * (1.0 - DOMAIN_SLACK)) or np.any(s > hi * (1.0 + DOMAIN_SLACK)) \
                or np.any(np.isnan(s)):
            raise DomainError(f"ratio outside the domain [{lo!r}, {hi!r}]")
        return np.clip(s, lo, hi)

    @staticmethod
    def _out(x):
        return float(x) if np.ndim(x) == 0 else x

    def _power_terms(self, s):
        u = np.exp(self._e * np.log(s))
        return u, 1.0 - self._b * u

    def g(self, s):
        s = self._clip(s)
        if self.kind == "identity":
            return self._out(s)
        c = self.c
        if self.kind == "log":
            L = np.log(s)
            return self._out((c + 1.0 + c * L) / (c + 1.0 - L))
        u, den = self._power_terms(s)
        return self._out((self._a * u - c) / den)

    def g_prime(self, s):
        s = self._clip(s)
        if self.kind == "identity":
            return self._out(np.ones_like(s))
        c = self.c
        if self.kind == "log":
            d = c + 1.0 - np.log(s)
            return self._out((c + 1.0) ** 2 / (s * d * d))
        u, den = self._power_terms(s)
        return self._out(self._k * u / (s * den * den))

    def g_second(self, s):
        s = self._clip(s)
        if self.kind == "identity":
            return self._out(np.zeros_like(s))
        c = self.c
        if self.kind == "log":
            d = c + 1.0 - np.log(s)
            gp = (c + 1.0) ** 2 / (s * d * d)
            return self._out(gp * (2.0 / d - 1.0) / s)
        u, den = self._power_terms(s)
        gp = self._k * u / (s * den * den)
        return self._out(gp * ((self._e - 1.0) + 2.0 * self._b * self._e * u / den) / s)

    def ode_residual(self, s):
        """``g'' - (2 g'^2/(c+g) - 2 theta g'/s)``; zero up to round-off."""
        s = self._clip(s)
        g, gp, gpp = self.g(s), self.g_prime(s), self.g_second(s)
        return self._out(gpp - (2.0 * gp * gp / (self.c + g) - 2.0 * self.theta * gp / s))

    def shadow_price(self, S, m):
        """``m * g(S/m)``, a price inside the bid-ask spread ``[(1-lam)S, S]``."""
        S = np.asarray(S, dtype=float)
        m = np.asarray(m, dtype=float)
        return self._out(m * self.g(S / m))

    def drift_vol(self, s, sigma: float):
        """Drift and volatility of ``dS_tilde/S_tilde`` at ratio ``s``."""
        s = self._clip(s)
        g, gp = self.g(s), self.g_prime(s)
        vol = sigma * gp * s / g
        drift = sigma * sigma * gp * gp * s * s / (g * (self.c + g))
        return self._out(drift), self._out(vol)

    def merton_ratio(self, s):
        """Local Merton fraction ``drift/vol^2 = 1/(1 + c/g(s))``."""
        return self._out(1.0 / (1.0 + self.c / np.asarray(self.g(s))))


def g_eval(s, t: ShadowTransform):
    return t.g(s)


def g_prime(s, t: ShadowTransform):
    return t.g_prime(s)


def g_second(s, t: ShadowTransform):
    return t.g_second(s)


def ode_residual(s, t: ShadowTransform):
    return t.ode_residual(s)


def shadow_price(S, m, t: ShadowTransform):
    return t.shadow_price(S, m)


def drift_vol(s, t: ShadowTransform, sigma: float):
    return t.drift_vol(s, sigma)
