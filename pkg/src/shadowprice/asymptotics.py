"""Expansions of the no-trade region and growth rate in powers of ``lam**(1/3)``.

Two independent constructions are provided:

* :func:`expand_c` / :func:`expand_s_bar` write ``s_bar`` and the
  smooth-pasting defect ``1 - g(s_bar)/s_bar`` as series in
  ``z = c - c_bar``, divide out ``z**3``, take the cube root and revert
  the series (Lagrange inversion) to get ``z`` as a series in
  ``t = lam**(1/3)``.
* :func:`expand_ansatz` plugs unknown coefficient vectors for ``s_bar``
  and ``c`` into the two smooth-pasting equations and solves for them
  order by order.

All coefficients are floats at a fixed numeric ``theta``.
"""
from __future__ import annotations

import functools
import math
from typing import NamedTuple

import numpy as np
from scipy.optimize import fsolve

from .errors import ConvergenceError, DomainError, UnsupportedRegime
from .model import REGIME_RTOL
from .series import FracSeries, lagrange_invert

DEFAULT_ORDER = 9
MAX_ORDER = 12


class Boundaries(NamedTuple):
    lo: FracSeries
    hi: FracSeries
    width: FracSeries


def _is_half(theta: float) -> bool:
    return math.isclose(theta, 0.5, rel_tol=REGIME_RTOL, abs_tol=0.0)


def _check(theta: float, order: int) -> None:
    if not (math.isfinite(theta) and theta > 0.0):
        raise DomainError(f"theta must be positive, got {theta!r}")
    if math.isclose(theta, 1.0, rel_tol=REGIME_RTOL, abs_tol=0.0):
        raise UnsupportedRegime("no expansion at theta = 1 (degenerate case)")
    if not 1 <= order <= MAX_ORDER:
        raise DomainError(f"order must be between 1 and {MAX_ORDER}, got {order!r}")


def _sbar_and_gap(c: FracSeries, theta: float):
    """``s_bar(c)`` and ``1 - g(s_bar)/s_bar`` for a series ``c``."""
    if _is_half(theta):
        L = c - c.recip()                       # (c^2 - 1)/c
        s = L.exp()
        g = (c + 1.0 + c * L) / (c + 1.0 - L)
    else:
        a = 2.0 * theta - 1.0 + 2.0 * theta * c
        b = 2.0 - 2.0 * theta - (2.0 * theta - 1.0) * c
        base = c / (a * b)                      # equals s_bar**(2 theta - 1)
        s = base.pow_real(1.0 / (2.0 * theta - 1.0))
        g = (a * base - c) / (1.0 - b * base)
    return s, 1.0 - g / s


@functools.lru_cache(maxsize=256)
def _pipeline(theta: float, order: int):
    c_bar = (1.0 - theta) / theta
    work = order + 3
    z = FracSeries.variable(work)
    s_of_z, lam_of_z = _sbar_and_gap(c_bar + z, theta)
    # lam = z^3 H(z) with H(0) = 4 theta^4 / (3 (1-theta)^2) > 0
    h = lam_of_z.shift_down(3, atol=1e-10)
    psi = h.pow_real(1.0 / 3.0).shift_up(1)     # t = z H(z)^(1/3)
    z_of_t = lagrange_invert(psi)
    c = c_bar + z_of_t
    s = s_of_z.truncate(order).compose(z_of_t)
    return c, s


def expand_c(theta: float, order: int = DEFAULT_ORDER) -> FracSeries:
    """Coefficients of ``c`` in powers of ``lam**(1/3)``; constant term ``(1-theta)/theta``."""
    _check(theta, order)
    return _pipeline(float(theta), int(order))[0]


def expand_s_bar(theta: float, order: int = DEFAULT_ORDER) -> FracSeries:
    """Coefficients of ``s_bar`` in powers of ``lam**(1/3)``; constant term 1."""
    _check(theta, order)
    return _pipeline(float(theta), int(order))[1]


def _boundaries(c: FracSeries, s: FracSeries, scale: FracSeries | None = None) -> Boundaries:
    cc = c if scale is None else c * scale
    lo = (1.0 + cc).recip()
    hi = (1.0 + cc / s).recip()
    return Boundaries(lo, hi, hi - lo)


def expand_boundaries(theta: float, order: int = DEFAULT_ORDER) -> Boundaries:
    """Buy boundary ``1/(1+c)``, sell boundary ``1/(1+c/s_bar)`` and their difference."""
    _check(theta, order)
    c, s = _pipeline(float(theta), int(order))
    return _boundaries(c, s)


def growth_series(c: FracSeries, s: FracSeries, theta: float, sigma: float) -> FracSeries:
    """Closed-form optimal growth rate evaluated on series ``c`` and ``s_bar``."""
    s2 = sigma * sigma
    if _is_half(theta):
        log_s = c - c.recip()
        return s2 / 2.0 * ((1.0 + c) * (1.0 + c - log_s)).recip()
    k = -2.0 - c + 2.0 * theta * (1.0 + c)
    den = 2.0 * (1.0 + c) * (s + k * s.pow_real(2.0 * theta))
    return (2.0 * theta - 1.0) * s2 * s / den


def expand_growth(theta: float, sigma: float, order: int = DEFAULT_ORDER) -> FracSeries:
    """Optimal growth rate in powers of ``lam**(1/3)``; constant term ``mu^2/(2 sigma^2)``."""
    _check(theta, order)
    if not (math.isfinite(sigma) and sigma > 0.0):
        raise DomainError(f"sigma must be positive, got {sigma!r}")
    c, s = _pipeline(float(theta), int(order))
    return growth_series(c, s, float(theta), float(sigma))


def cost_to_midprice_scale(order: int) -> FracSeries:
    """``lam**(1/3)`` as a series in ``u = lam_mid**(1/3)``, where ``lam = 2 lam_mid/(1+lam_mid)``."""
    u3 = FracSeries([0.0, 0.0, 0.0, 1.0], order)
    return ((1.0 + u3).pow_real(-1.0 / 3.0) * 2.0 ** (1.0 / 3.0)).shift_up(1)


def expand_midprice(theta: float, order: int = DEFAULT_ORDER, *,
                    exact_scaling: bool = False) -> Boundaries:
    """No-trade boundaries in terms of the mid price, in powers of ``lam_mid**(1/3)``.

    Costs are re-expressed symmetrically around ``S_mid = (2-lam)/2 S``
    with ``lam_mid = lam/(2-lam)``, i.e. ``lam = 2 lam_mid/(1+lam_mid)``.
    By default the bond/stock ratio is scaled by ``2/(2-lam_mid)``, the
    form whose coefficients are usually quoted for this comparison.
    ``exact_scaling=True`` uses ``2/(2-lam) = 1+lam_mid`` instead, which is
    what the change of price literally implies.  The two differ from the
    ``lam_mid`` term onwards in ``lo`` and ``hi`` but give the same width
    through that order.
    """
    _check(theta, order)
    c, s = _pipeline(float(theta), int(order))
    tau = cost_to_midprice_scale(order)
    c_u, s_u = c.compose(tau), s.compose(tau)
    u3 = FracSeries([0.0, 0.0, 0.0, 1.0], order)
    scale = 1.0 + u3 if exact_scaling else (1.0 - 0.5 * u3).recip()
    return _boundaries(c_u, s_u, scale)


# --- coefficient-comparison route -------------------------------------------

def _ansatz_residuals(A: np.ndarray, B: np.ndarray, theta: float, n: int):
    c_bar = (1.0 - theta) / theta
    s = FracSeries(np.concatenate([[1.0], A]), n)
    c = FracSeries(np.concatenate([[c_bar], B]), n)
    lam = FracSeries([0.0, 0.0, 0.0, 1.0], n)
    if _is_half(theta):
        L = s.log()
        d = c + 1.0 - L
        g = (c + 1.0 + c * L) / d
        gp = (c + 1.0) * (c + 1.0) / (s * d * d)
    else:
        e = 2.0 * theta - 1.0
        a = e + 2.0 * theta * c
        b = 2.0 - 2.0 * theta - e * c
        u = s.pow_real(e)
        d = 1.0 - b * u
        g = (a * u - c) / d
        gp = e * (a - b * c) * u / (s * d * d)
    return g - (1.0 - lam) * s, gp - (1.0 - lam)


def expand_ansatz(theta: float, order: int = DEFAULT_ORDER) -> tuple[FracSeries, FracSeries]:
    """``(c, s_bar)`` series from coefficient comparison in ``g(s_bar) = (1-lam) s_bar``
    and ``g'(s_bar) = 1 - lam``.

    The pair ``(A_k, B_k)`` of ``s_bar`` and ``c`` coefficients first
    enters the second equation at order ``k+1`` and the first at order
    ``k+2``; those two coefficient equations are solved step by step.
    Only the first step is nonlinear.
    """
    _check(theta, order)
    n = order + 2
    A = np.zeros(order)
    B = np.zeros(order)
    sign = 1.0 if theta < 1.0 else -1.0

    for k in range(1, order + 1):
        def resid(x, k=k):
            A[k - 1], B[k - 1] = x
            r1, r2 = _ansatz_residuals(A, B, theta, n)
            return [r2[k + 1], r1[k + 2]]

        guess = [sign, 1.0] if k == 1 else [0.0, 0.0]
        sol, info, ier, msg = fsolve(resid, guess, full_output=True, xtol=1e-14)
        if ier != 1 and max(abs(v) for v in info["fvec"]) > 1e-12:
            raise ConvergenceError(f"coefficient comparison failed at order {k}: {msg}")
        A[k - 1], B[k - 1] = sol
    c_bar = (1.0 - theta) / theta
    return (FracSeries(np.concatenate([[c_bar], B])),
            FracSeries(np.concatenate([[1.0], A])))


def evaluate(series: FracSeries, lam: float, order: int | None = None) -> float:
    """Sum the series at ``t = lam**(1/3)``, optionally truncated at ``order``."""
    if order is not None:
        series = series.truncate(order)
    return float(series(lam ** (1.0 / 3.0)))


def truncation_errors(theta: float, lam: float, max_order: int = MAX_ORDER) -> np.ndarray:
    """``|c_exact - c_K|`` for ``K = 1..max_order``, using the exact solver root.

    An empirical probe only: where these errors stop decreasing in ``K``
    the series is no longer useful at this ``lam``.
    """
    from .model import params_from_theta
    from .solver import solve

    _check(theta, max_order)
    exact = solve(params_from_theta(theta, lam)).c
    c = expand_c(theta, max_order)
    return np.array([abs(exact - evaluate(c, lam, k)) for k in range(1, max_order + 1)])


def optimal_truncation(theta: float, lam: float, max_order: int = MAX_ORDER) -> int:
    """Order ``K`` in ``1..max_order`` with the smallest truncation error.

    Single steps can increase the error even where the series converges,
    since some coefficients are nearly zero, so the minimiser is reported
    rather than the first increase.  ``K == max_order`` means no sign of
    divergence up to that order.
    """
    err = truncation_errors(theta, lam, max_order)
    floor = 1e-13 * max(1.0, abs((1.0 - theta) / theta))     # rounding, not truncation
    below = np.nonzero(err <= floor)[0]
    if below.size:
        return int(below[0]) + 1
    return int(np.argmin(err)) + 1
