"""Free-boundary constants ``c`` and ``s_bar`` of the no-trade region.

For ``0 < theta != 1`` the constant ``c`` is the unique root of the
friction gap ``f`` on a regime-dependent bracket, and ``s_bar`` follows
from ``c`` in closed form.  ``theta == 1`` is degenerate: ``c = 0`` and
``s_bar = inf`` (no trading after time zero).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError, UnsupportedRegime
from .model import MarketParams, Regime, validate_params

ROOT_TOL = 1e-12
MAX_ITER = 200
EDGE_OFFSET = 1e-9
MAX_DOUBLINGS = 60
SCAN_POINTS = 1000


@dataclass(frozen=True)
class FrictionSolution:
    """Solved constants for one ``(theta, lam)`` pair.

    ``pi_lo = 1/(1+c)`` and ``pi_hi = 1/(1+c/s_bar)`` bound the stock
    fraction in terms of the ask price (buy and sell boundary
    respectively); ``shadow_pi_lo``/``shadow_pi_hi`` are the same
    boundaries in terms of the shadow price.
    """

    params: MarketParams
    c: float
    s_bar: float
    pi_lo: float
    pi_hi: float
    shadow_pi_lo: float
    shadow_pi_hi: float

    @property
    def theta(self) -> float:
        return self.params.theta

    @property
    def lam(self) -> float:
        return self.params.lam

    @property
    def regime(self) -> Regime:
        return self.params.regime

    @property
    def degenerate(self) -> bool:
        return math.isinf(self.s_bar)

    @property
    def domain(self) -> tuple[float, float]:
        """Interval in which the ratio ``S/m`` is kept (unrestricted when degenerate)."""
        if self.degenerate:
            return 0.0, math.inf
        if self.s_bar >= 1.0:
            return 1.0, self.s_bar
        return self.s_bar, 1.0

    @property
    def symmetry_residual(self) -> float:
        """``shadow_pi_lo + shadow_pi_hi - 2 theta``; zero for a correct solution."""
        if self.degenerate:
            return 0.0
        return self.shadow_pi_lo + self.shadow_pi_hi - 2.0 * self.theta


def bracket(theta: float) -> tuple[float, float]:
    """Open interval known to contain exactly one root of the friction gap."""
    left = (1.0 - theta) / theta
    if theta <= 0.5:
        return left, math.inf
    if theta < 1.0:
        return left, (1.0 - theta) / (theta - 0.5)
    return left, 0.0


def _check_regime(params: MarketParams) -> None:
    if params.regime is Regime.UNIT:
        raise UnsupportedRegime("theta = 1 is degenerate; use degenerate_solution()")


def _check_in_bracket(c: float, theta: float) -> None:
    lo, hi = bracket(theta)
    if not (lo < c < hi) or not math.isfinite(c):
        raise DomainError(f"c={c!r} outside the open bracket ({lo!r}, {hi!r})")


def _log_base(c: float, theta: float) -> float:
    """log of ``c / ((2θ-1+2cθ)(2-2θ-c(2θ-1)))``.

    With ``d = c - c_bar`` the two factors are ``a = 1 + 2θd`` and
    ``b = c_bar - (2θ-1)d``, and ``c - ab = (2θ-1) d (2 + 2θd)``, so the
    logarithm is a ``log1p`` with the small factor ``2θ-1`` kept exact.
    """
    return _log_base_d(c - (1.0 - theta) / theta, theta, c)


def _log_base_d(d: float, theta: float, c: float | None = None) -> float:
    e = 2.0 * theta - 1.0
    a = 1.0 + 2.0 * theta * d
    b = (1.0 - theta) / theta - e * d
    x = e * ((2.0 + 2.0 * theta * d) / a) * (d / b)
    if abs(x) <= 0.5:
        return math.log1p(x)
    if c is None:
        c = (1.0 - theta) / theta + d
    if not (c * a * b > 0.0 and math.isfinite(x)):
        raise DomainError(f"non-positive base of the fractional power at d={d!r}")
    return math.log(abs(c)) - math.log(abs(a)) - math.log(abs(b))


def _gap(c: float, theta: float, lam: float, half: bool) -> float:
    if half:
        lhs = (c * c - 1.0) / c
        rhs = c * c / (1.0 - lam)
    else:
        a = 1.0 + 2.0 * theta * (c - (1.0 - theta) / theta)
        lhs = (1.0 - theta) / (theta - 0.5) * _log_base(c, theta)
        rhs = a * a / (1.0 - lam)
    if lhs > 709.0:
        return math.inf
    return math.exp(lhs) - rhs


def friction_gap(c: float, params: MarketParams) -> float:
    """Evaluate the scalar equation ``f(c)`` whose root fixes the no-trade region."""
    _check_regime(params)
    theta = params.theta
    _check_in_bracket(c, theta)
    return _gap(c, theta, params.lam, params.regime is Regime.HALF)


def s_bar_of_c(c: float, params: MarketParams) -> float:
    """Reflection boundary ``s_bar`` for a given ``c``."""
    _check_regime(params)
    theta = params.theta
    _check_in_bracket(c, theta)
    if params.regime is Regime.HALF:
        return math.exp((c * c - 1.0) / c)
    return math.exp(_log_base(c, theta) / (2.0 * theta - 1.0))


# --- root search in a log-distance coordinate ---------------------------------
#
# f changes sign exactly once on the bracket, but its scale varies over
# hundreds of orders of magnitude and for theta near 1 the root sits
# extremely close to a bracket edge.  The search therefore uses
#   F = (1-θ)/(θ-1/2) log(base) - log(A^2/(1-lam)),   sign(F) = sign(f),
# as a function of v = log u, where u is the distance of c from one end
# of the bracket:
#   anchor "cbar":  c = c_bar + u   (the whole bracket when theta <= 1/2)
#   anchor "edge":  c = hi - u      (the half of a finite bracket next to hi)
# Every factor of base and A is written so that it is computed without
# cancellation in its own half of the bracket.

class _Coord:
    def __init__(self, params: MarketParams, anchor: str):
        self.theta = theta = params.theta
        self.half = params.regime is Regime.HALF
        self.e = 2.0 * theta - 1.0
        self.expo = (1.0 - theta) / (theta - 0.5) if not self.half else math.nan
        self.c_bar = (1.0 - theta) / theta
        self.hi = bracket(theta)[1]
        self.log_cost = -math.log1p(-params.lam)
        self.anchor = anchor

    def c(self, v: float) -> float:
        u = math.exp(v)
        return self.c_bar + u if self.anchor == "cbar" else self.hi - u

    def logs(self, v: float) -> tuple[float, float]:
        """``(log s_bar, F)`` at coordinate ``v``."""
        theta, e = self.theta, self.e
        u = math.exp(v)
        if self.half:
            ls = u * (2.0 + u) / (1.0 + u)        # (c^2-1)/c with c = 1+u
            return ls, ls - 2.0 * math.log1p(u) - self.log_cost
        if self.anchor == "cbar":
            log_a = math.log1p(2.0 * theta * u)
            lb = _log_base_d(u, theta)
        elif theta < 1.0:
            c = self.hi - u
            log_a = math.log(e + 2.0 * theta * c)
            lb = math.log(c) - log_a - math.log(e) - v       # B = e u
        else:
            log_a = math.log(e - 2.0 * theta * u)
            lb = v - log_a - math.log(2.0 * theta - 2.0 - e * u)   # c = -u
        return lb / e, self.expo * lb - 2.0 * log_a - self.log_cost

    def F(self, v: float) -> float:
        return self.logs(v)[1]


def _walk(F, v: float, want_positive: bool, step: float) -> float:
    """Move ``v`` by ``step`` (doubling when far out) until ``F`` has the wanted sign."""
    for _ in range(MAX_DOUBLINGS * 20):
        val = F(v)
        if (val > 0.0) if want_positive else (val < 0.0):
            return v
        v += step
        if abs(v) > 16.0:
            step *= 2.0
        if abs(v) > 1e6:
            break
    raise ConvergenceError("no sign change of f found on the bracket")


def _setup(params: MarketParams) -> tuple[_Coord, float, float]:
    """Coordinate system and ``(v_neg, v_pos)`` with ``F(v_neg) < 0 < F(v_pos)``."""
    theta = params.theta
    if math.isinf(bracket(theta)[1]):
        co = _Coord(params, "cbar")
        v_neg = _walk(co.F, math.log(EDGE_OFFSET * max(1.0, co.c_bar)), False, -1.0)
        v_pos = _walk(co.F, 0.0, True, 1.0)
        if v_pos > 700.0:
            raise ConvergenceError("the root is not representable in double precision")
        return co, v_neg, v_pos
    near = _Coord(params, "cbar")
    half_width = 0.5 * abs(near.hi - near.c_bar)
    vm = math.log(half_width)
    if near.F(vm) > 0.0:
        return near, _walk(near.F, vm + math.log(EDGE_OFFSET), False, -1.0), vm
    far = _Coord(params, "edge")
    if not far.F(vm) < 0.0:
        return near, _walk(near.F, vm + math.log(EDGE_OFFSET), False, -1.0), vm
    return far, vm, _walk(far.F, vm + math.log(EDGE_OFFSET), True, -1.0)


def _c_ordered_signs(params: MarketParams, n: int) -> list[bool]:
    co, v_neg, v_pos = _setup(params)
    if co.anchor == "cbar" and math.isinf(co.hi):
        vs = np.linspace(min(v_neg, math.log(EDGE_OFFSET * max(1.0, co.c_bar))), v_pos, n)
        return [co.F(float(v)) > 0.0 for v in vs]
    near, far = _Coord(params, "cbar"), _Coord(params, "edge")
    vm = math.log(0.5 * abs(near.hi - near.c_bar))
    low_end = math.log(EDGE_OFFSET) + vm
    far_end = min(low_end, v_pos) if co.anchor == "edge" else low_end
    near_end = min(low_end, v_neg) if co.anchor == "cbar" else low_end
    k = n // 2
    left = [near.F(float(v)) > 0.0 for v in np.linspace(near_end, vm, k)]
    right = [far.F(float(v)) > 0.0 for v in np.linspace(vm, far_end, n - k)[1:]]
    return left + right


def sign_changes(params: MarketParams, n: int = SCAN_POINTS) -> int:
    """Count sign changes of ``f`` on an ``n``-point scan of the bracket.

    The scan is uniform in the log-distance of ``c`` from the nearer end
    of the bracket (from ``c_bar`` alone when the bracket is unbounded)
    and reaches within a relative ``EDGE_OFFSET`` of both ends, or out to
    where ``f`` is first seen positive for an unbounded bracket.
    """
    _check_regime(params)
    signs = np.asarray(_c_ordered_signs(params, n), dtype=np.int8)
    return int(np.count_nonzero(np.diff(signs)))


def _build(params: MarketParams, c: float, s_bar: float) -> FrictionSolution:
    lam = params.lam
    return FrictionSolution(
        params=params,
        c=c,
        s_bar=s_bar,
        pi_lo=1.0 / (1.0 + c),
        pi_hi=1.0 / (1.0 + c / s_bar),
        shadow_pi_lo=1.0 / (1.0 + c),
        shadow_pi_hi=1.0 / (1.0 + c / ((1.0 - lam) * s_bar)),
    )


def _polish(c: float, params: MarketParams) -> float:
    """Nearest neighbour of ``c`` (within a few ulps) minimising ``|f|``."""
    theta, lam = params.theta, params.lam
    half = params.regime is Regime.HALF
    lo, hi = bracket(theta)
    cands = [c]
    for direction in (-math.inf, math.inf):
        x = c
        for _ in range(4):
            x = math.nextafter(x, direction)
            cands.append(x)
    best, best_val = c, math.inf
    for x in cands:
        if not lo < x < hi:
            continue
        try:
            val = abs(_gap(x, theta, lam, half))
        except (DomainError, ValueError, OverflowError):
            continue
        if val < best_val:
            best, best_val = x, val
    return best


def solve_c(params: MarketParams, *, check_unique: bool = False) -> FrictionSolution:
    """Solve ``f(c) = 0`` and assemble the :class:`FrictionSolution`.

    With ``check_unique=True`` a post-solve grid scan verifies that ``f``
    changes sign exactly once on the bracket.
    """
    _check_regime(params)
    co, a, b = _setup(params)
    try:
        v, info = brentq(co.F, a, b, xtol=1e-300, rtol=4 * np.finfo(float).eps,
                         maxiter=MAX_ITER, full_output=True, disp=False)
    except (ValueError, RuntimeError) as exc:
        raise ConvergenceError(str(exc)) from None
    if not info.converged:
        raise ConvergenceError(f"root search did not converge: {info.flag}")
    log_s, resid = co.logs(v)
    # F is a relative (logarithmic) residual of f
    if not abs(resid) < ROOT_TOL:
        raise ConvergenceError(f"relative residual {abs(resid):.3e} above tolerance {ROOT_TOL}")
    c = co.c(v)
    lo, hi = bracket(params.theta)
    if not (lo < c < hi) or not abs(log_s) < 700.0:
        raise ConvergenceError("the root is not representable in double precision "
                               f"(theta={params.theta!r}, lam={params.lam!r})")
    c_pol = c if co.anchor == "edge" else _polish(c, params)
    if c_pol != c:
        c = c_pol
        log_s = math.log(s_bar_of_c(c, params))
    if check_unique:
        n = sign_changes(params)
        if n != 1:
            raise ConvergenceError(f"expected one sign change of f on the bracket, found {n}")
    return _build(params, c, math.exp(log_s))


def degenerate_solution(params: MarketParams) -> FrictionSolution:
    """The ``theta == 1`` solution: ``c = 0``, ``s_bar = inf``, fractions all 1."""
    if params.regime is not Regime.UNIT:
        raise UnsupportedRegime("degenerate_solution() only applies to theta = 1")
    return FrictionSolution(params, 0.0, math.inf, 1.0, 1.0, 1.0, 1.0)


def solve(params: MarketParams) -> FrictionSolution:
    """Dispatch to :func:`solve_c` or :func:`degenerate_solution`."""
    if params.regime is Regime.UNIT:
        return degenerate_solution(params)
    return solve_c(params)


def admissibility_margin(sol: FrictionSolution) -> float:
    """Lower bound ``V >= margin * V_tilde`` on liquidation wealth.

    A positive margin certifies that the shadow-optimal portfolio stays
    solvent at the bid/ask prices.
    """
    if sol.degenerate:
        return 1.0
    return 1.0 - sol.lam * sol.shadow_pi_hi


def scan_lambda0(theta: float, lams=None, sigma: float = 1.0) -> float | None:
    """Smallest grid ``lam`` with non-positive admissibility margin, or None.

    Purely empirical; no analytic threshold is implied.
    """
    if lams is None:
        lams = np.geomspace(1e-6, 0.99, 400)
    for lam in lams:
        sol = solve(validate_params(theta * sigma * sigma, sigma, float(lam)))
        if admissibility_margin(sol) <= 0.0:
            return float(lam)
    return None
