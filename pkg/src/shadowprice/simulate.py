"""Monte Carlo simulation of the shadow price and its log-optimal portfolio.

The ask price is stepped exactly (log-normal increments).  After every
step the pivot ``m`` is clamped so that ``S/m`` stays in the reflection
domain; holdings only change when ``m`` moves, by the multiplicative rule
``phi <- phi * (m_new/m_old)**e`` with ``e = -c/(c+1)`` at the ``S/m = 1``
boundary and ``e = -c/(c+(1-lam) s_bar)`` at the ``S/m = s_bar`` boundary.
The bond position is then reset to ``c * m * phi``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numba
import numpy as np

from .errors import DomainError, SimulationError
from .model import MarketParams, Regime
from .solver import FrictionSolution, admissibility_margin

CHUNK = 1 << 16
BOUNDARY_RTOL = 1e-9
HIST_BINS = 50

# indices into the kernel's statistics vector
_ST = dict(spread=0, rec=1, pi_min=2, pi_max=3, trade=4, trade_interior=5, sf=6,
           v_above=7, v_below=8, bad=9, flips=10)
_NSTATS = len(_ST)


@dataclass(frozen=True)
class PathConfig:
    """Simulation grid and seeding.

    ``substeps`` draws the Brownian driver on a grid ``substeps`` times
    finer than ``dt`` and aggregates it, so runs with ``(dt, substeps)`` and
    ``(dt/substeps, 1)`` see the same Brownian path for the same seed.
    """

    T: float
    dt: float
    n_paths: int
    seed: int = 0
    record_full_paths: bool = False
    x: float = 1.0
    substeps: int = 1
    hist_bins: int = HIST_BINS

    def __post_init__(self):
        if not (math.isfinite(self.T) and self.T > 0):
            raise DomainError(f"T must be positive, got {self.T!r}")
        if not (math.isfinite(self.dt) and 0 < self.dt <= self.T):
            raise DomainError(f"dt must lie in (0, T], got {self.dt!r}")
        if int(self.n_paths) < 1:
            raise DomainError("n_paths must be at least 1")
        if int(self.seed) < 0:
            raise DomainError("seed must be non-negative")
        if not self.x > 0:
            raise DomainError("initial endowment must be positive")
        if int(self.substeps) < 1:
            raise DomainError("substeps must be at least 1")

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.T / self.dt)))

    def rng(self, path_index: int) -> np.random.Generator:
        """Generator for one path, a function of ``(seed, path_index)`` only."""
        return np.random.default_rng(np.random.SeedSequence(int(self.seed), spawn_key=(int(path_index),)))


@dataclass
class PathRecord:
    times: np.ndarray
    S: np.ndarray
    m: np.ndarray
    S_tilde: np.ndarray
    phi0: np.ndarray
    phi: np.ndarray
    V: np.ndarray
    V_tilde: np.ndarray
    regime_flags: np.ndarray

    COLUMNS = ("t", "S", "m", "S_tilde", "phi0", "phi", "V", "V_tilde", "regime")

    def write_csv(self, path) -> None:
        cols = (self.times, self.S, self.m, self.S_tilde, self.phi0, self.phi,
                self.V, self.V_tilde)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(self.COLUMNS)
            for i in range(self.times.size):
                w.writerow([format(float(col[i]), ".17g") for col in cols]
                           + [int(self.regime_flags[i])])


@dataclass
class SimSummary:
    T: float
    dt: float
    n_paths: int
    seed: int
    log_v_tilde: np.ndarray
    log_v: np.ndarray
    spread_violation: float
    rec_error: float
    pi_tilde_min: float
    pi_tilde_max: float
    total_trade: float
    interior_trade: float
    self_financing_rms: float
    wealth_order_violation: float
    regime_flips: int
    hist_counts: np.ndarray
    hist_edges: np.ndarray
    x: float = 1.0
    paths: list = field(default_factory=list)

    @property
    def growth(self) -> float:
        """Empirical ``(1/T) E[log V_tilde_T]`` (shadow liquidation)."""
        return float(np.mean(self.log_v_tilde) - math.log(self.x)) / self.T

    @property
    def growth_se(self) -> float:
        if self.n_paths < 2:
            return math.nan
        return float(np.std(self.log_v_tilde, ddof=1) / math.sqrt(self.n_paths)) / self.T

    @property
    def growth_liquidation(self) -> float:
        """Empirical ``(1/T) E[log V_T]`` (bid/ask liquidation)."""
        return float(np.mean(self.log_v) - math.log(self.x)) / self.T

    @property
    def interior_fraction(self) -> float:
        return self.interior_trade / self.total_trade if self.total_trade > 0 else 0.0

    def occupation(self) -> np.ndarray:
        total = self.hist_counts.sum()
        return self.hist_counts / total if total else self.hist_counts.astype(float)

    def to_dict(self) -> dict:
        return {
            "T": self.T, "dt": self.dt, "n_paths": self.n_paths, "seed": self.seed,
            "growth": self.growth, "growth_se": self.growth_se,
            "growth_liquidation": self.growth_liquidation,
            "mean_log_v_tilde": float(np.mean(self.log_v_tilde)),
            "mean_log_v": float(np.mean(self.log_v)),
            "spread_violation": self.spread_violation, "rec_error": self.rec_error,
            "pi_tilde_min": self.pi_tilde_min, "pi_tilde_max": self.pi_tilde_max,
            "total_trade": self.total_trade, "interior_trade": self.interior_trade,
            "interior_fraction": self.interior_fraction,
            "self_financing_rms": self.self_financing_rms,
            "wealth_order_violation": self.wealth_order_violation,
            "regime_flips": self.regime_flips,
            "hist_edges": self.hist_edges.tolist(),
            "hist_counts": [int(v) for v in self.hist_counts],
        }


# --- scalar reference operations --------------------------------------------

def reflect_update(m: float, S_new: float, sol: FrictionSolution) -> float:
    """Move the pivot ``m`` just enough to put ``S_new/m`` back in the domain."""
    if not (m > 0 and S_new > 0):
        raise DomainError("pivot and price must be positive")
    if sol.degenerate:
        return min(m, S_new)
    if sol.s_bar > 1.0:
        return min(max(m, S_new / sol.s_bar), S_new)
    return max(min(m, S_new / sol.s_bar), S_new)


def _exponent(sol: FrictionSolution, at_one: bool) -> float:
    c = sol.c
    if at_one:
        return -c / (c + 1.0)
    if sol.degenerate:
        return 0.0
    q = (1.0 - sol.lam) * sol.s_bar
    return -c / (c + q)


def hits_unit_boundary(m_old: float, m_new: float, sol: FrictionSolution) -> bool:
    """True if a pivot move happened at ``S/m = 1`` (buying), False at ``s_bar`` (selling)."""
    low = sol.degenerate or sol.s_bar > 1.0
    return m_new < m_old if low else m_new > m_old


def initial_holdings(sol: FrictionSolution, x: float = 1.0) -> tuple[float, float]:
    """Holdings right after converting the endowment ``x`` at ``S_0 = 1``."""
    return sol.c * x / (sol.c + 1.0), x / (sol.c + 1.0)


def portfolio_step(phi: float, m_old: float, m_new: float,
                   sol: FrictionSolution) -> tuple[float, float]:
    """Holdings ``(phi0, phi)`` after the pivot moves from ``m_old`` to ``m_new``."""
    if not (m_old > 0 and m_new > 0):
        raise DomainError("pivots must be positive")
    if m_new != m_old:
        phi = phi * (m_new / m_old) ** _exponent(sol, hits_unit_boundary(m_old, m_new, sol))
    return sol.c * m_new * phi, phi


# --- compiled kernel ---------------------------------------------------------

@numba.njit(cache=True)
def _g(r, kind, c, e, a, b):
    if kind == 2:
        return r
    if kind == 1:
        L = math.log(r)
        return (c + 1.0 + c * L) / (c + 1.0 - L)
    u = math.exp(e * math.log(r))
    return (a * u - c) / (1.0 - b * u)


@numba.njit(cache=True)
def _advance(z, state, stats, hist, rec, rec_pos, t0, dt, sdt, drift, s_bar, c, lam,
             kind, e, a, b, e_one, e_bar, low, dlo, dhi, margin):
    S, m, phi0, phi, regime, vt = state[0], state[1], state[2], state[3], state[4], state[5]
    nb = hist.size
    width = dhi - dlo
    recording = rec.shape[0] > 0
    for i in range(z.size):
        S_new = S * math.exp(sdt * z[i] + drift)
        if low:
            m_new = min(max(m, S_new / s_bar), S_new)
        else:
            m_new = max(min(m, S_new / s_bar), S_new)
        phi_new = phi
        if m_new != m:
            at_one = (m_new < m) if low else (m_new > m)
            ex = e_one if at_one else e_bar
            phi_new = phi * (m_new / m) ** ex
            new_regime = 0.0 if at_one else 1.0
            if new_regime != regime:
                stats[10] += 1.0
            regime = new_regime
        phi0_new = c * m_new * phi_new
        r = S_new / m_new
        if r < dlo:
            r = dlo
        elif r > dhi:
            r = dhi
        St = m_new * _g(r, kind, c, e, a, b)
        vt_new = phi0_new + phi_new * St
        if phi_new >= 0.0:
            v_new = phi0_new + phi_new * (1.0 - lam) * S_new
        else:
            v_new = phi0_new + phi_new * S_new
        if not (vt_new > 0.0 and v_new > 0.0):
            stats[9] += 1.0
        # pathwise diagnostics
        viol = max(St - S_new, (1.0 - lam) * S_new - St, 0.0) / S_new
        stats[0] = max(stats[0], viol)
        if phi0_new != 0.0:
            stats[1] = max(stats[1], abs(phi0_new - c * m_new * phi_new) / abs(phi0_new))
        pit = phi_new * St / vt_new
        stats[2] = min(stats[2], pit)
        stats[3] = max(stats[3], pit)
        dphi = abs(phi_new - phi)
        if dphi > 0.0:
            stats[4] += dphi
            if abs(r - 1.0) > BOUNDARY_RTOL and abs(r / s_bar - 1.0) > BOUNDARY_RTOL:
                stats[5] += dphi
        stats[6] += ((phi0_new - phi0) + St * (phi_new - phi)) / vt_new
        stats[7] = max(stats[7], (v_new - vt_new) / vt_new)
        stats[8] = max(stats[8], (margin * vt_new - v_new) / vt_new)
        if nb > 0:
            k = int((r - dlo) / width * nb)
            if k >= nb:
                k = nb - 1
            elif k < 0:
                k = 0
            hist[k] += 1
        S, m, phi0, phi, vt = S_new, m_new, phi0_new, phi_new, vt_new
        if recording:
            j = rec_pos + i + 1
            rec[j, 0] = t0 + (i + 1) * dt
            rec[j, 1] = S
            rec[j, 2] = m
            rec[j, 3] = St
            rec[j, 4] = phi0
            rec[j, 5] = phi
            rec[j, 6] = v_new
            rec[j, 7] = vt
            rec[j, 8] = regime
    state[0], state[1], state[2], state[3], state[4], state[5] = S, m, phi0, phi, regime, vt


def _constants(sol: FrictionSolution):
    theta, c = sol.theta, sol.c
    if sol.degenerate:
        kind, e, a, b = 2, 0.0, 0.0, 0.0
    elif sol.regime is Regime.HALF:
        kind, e, a, b = 1, 0.0, 0.0, 0.0
    else:
        kind = 0
        e = 2.0 * theta - 1.0
        a = 2.0 * theta - 1.0 + 2.0 * c * theta
        b = 2.0 - 2.0 * theta - c * (2.0 * theta - 1.0)
    low = sol.degenerate or sol.s_bar > 1.0
    dlo, dhi = sol.domain
    return dict(kind=kind, e=e, a=a, b=b, e_one=_exponent(sol, True),
                e_bar=_exponent(sol, False), low=low, dlo=dlo, dhi=dhi)


def _run_path(params: MarketParams, sol: FrictionSolution, cfg: PathConfig, index: int,
              consts: dict, stats: np.ndarray, hist: np.ndarray, record: bool):
    n = cfg.n_steps
    dt = cfg.T / n
    sigma, mu = params.sigma, params.mu
    phi0, phi = initial_holdings(sol, cfg.x)
    state = np.array([1.0, 1.0, phi0, phi, 0.0, cfg.x])
    rec = np.empty((n + 1 if record else 0, 9))
    if record:
        v0 = phi0 + (phi * (1.0 - params.lam) if phi >= 0 else phi)
        rec[0] = (0.0, 1.0, 1.0, 1.0, phi0, phi, v0, cfg.x, 0.0)
    rng = cfg.rng(index)
    sub = int(cfg.substeps)
    s_bar = sol.s_bar if not sol.degenerate else math.inf
    margin = admissibility_margin(sol)
    done = 0
    while done < n:
        k = min(CHUNK, n - done)
        z = rng.standard_normal(k * sub)
        if sub > 1:
            z = z.reshape(k, sub).sum(axis=1) / math.sqrt(sub)
        _advance(z, state, stats, hist, rec, done, done * dt, dt, sigma * math.sqrt(dt),
                 (mu - 0.5 * sigma * sigma) * dt, s_bar, sol.c, params.lam,
                 consts["kind"], consts["e"], consts["a"], consts["b"], consts["e_one"],
                 consts["e_bar"], consts["low"], consts["dlo"], consts["dhi"], margin)
        done += k
    S, m, phi0, phi = state[0], state[1], state[2], state[3]
    vt = state[5]
    v = phi0 + (phi * (1.0 - params.lam) * S if phi >= 0 else phi * S)
    return vt, v, (PathRecord(*(rec[:, j] for j in range(8)), rec[:, 8].astype(np.int8))
                   if record else None)


def simulate_paths(params: MarketParams, sol: FrictionSolution, cfg: PathConfig) -> SimSummary:
    """Simulate ``cfg.n_paths`` independent paths and summarise them.

    Raises
    ------
    SimulationError
        If the admissibility margin is not positive, or any liquidation
        or shadow wealth becomes non-positive along a path.
    """
    if sol.params != params:
        raise DomainError("solution was computed for different market parameters")
    if admissibility_margin(sol) <= 0.0:
        raise SimulationError("admissibility margin is not positive; lambda is too large for this theta")
    consts = _constants(sol)
    nb = 0 if sol.degenerate else int(cfg.hist_bins)
    hist = np.zeros(nb, dtype=np.int64)
    stats = np.zeros(_NSTATS)
    stats[2], stats[3] = math.inf, -math.inf
    stats[7] = stats[8] = -math.inf
    n = int(cfg.n_paths)
    log_vt = np.empty(n)
    log_v = np.empty(n)
    sf = np.empty(n)
    paths = []
    for i in range(n):
        sf_before = stats[6]
        stats[6] = 0.0
        vt, v, rec = _run_path(params, sol, cfg, i, consts, stats, hist, cfg.record_full_paths)
        sf[i] = stats[6]
        stats[6] = sf_before
        if stats[9] > 0 or not (vt > 0 and v > 0):
            raise SimulationError(f"wealth became non-positive on path {i}")
        log_vt[i] = math.log(vt)
        log_v[i] = math.log(v)
        if rec is not None:
            paths.append(rec)
    dlo, dhi = sol.domain if not sol.degenerate else (1.0, 1.0)
    return SimSummary(
        T=cfg.T, dt=cfg.T / cfg.n_steps, n_paths=n, seed=int(cfg.seed),
        log_v_tilde=log_vt, log_v=log_v,
        spread_violation=float(stats[0]), rec_error=float(stats[1]),
        pi_tilde_min=float(stats[2]), pi_tilde_max=float(stats[3]),
        total_trade=float(stats[4]), interior_trade=float(stats[5]),
        self_financing_rms=float(np.sqrt(np.mean(sf * sf))),
        wealth_order_violation=float(max(stats[7], stats[8], 0.0)),
        regime_flips=int(stats[10]),
        hist_counts=hist, hist_edges=np.linspace(dlo, dhi, nb + 1),
        x=cfg.x, paths=paths,
    )


def simulate_path(params: MarketParams, sol: FrictionSolution, cfg: PathConfig,
                  index: int = 0) -> PathRecord:
    """Full record of path ``index`` (same randomness as in :func:`simulate_paths`)."""
    consts = _constants(sol)
    stats = np.zeros(_NSTATS)
    hist = np.zeros(0, dtype=np.int64)
    return _run_path(params, sol, cfg, index, consts, stats, hist, True)[2]
