"""
Simulating the shadow-price strategy
====================================

Monte Carlo of the optimal holdings, compared with the closed-form growth
rate, plus the occupation histogram of the reflected ratio.
"""

import numpy as np

from shadowprice import (PathConfig, growth_rate_closed, params_from_theta, simulate_path,
                         simulate_paths, solve, stationary_cdf)

params = params_from_theta(0.5, 0.01, sigma=0.4)
sol = solve(params)
delta = growth_rate_closed(sol, params.sigma)

run = simulate_paths(params, sol, PathConfig(T=50.0, dt=1e-3, n_paths=200, seed=0))
print(f"empirical growth {run.growth:.5f} +- {run.growth_se:.5f}, closed form {delta:.5f}")
print(f"stock fraction at shadow prices stayed in [{run.pi_tilde_min:.4f}, {run.pi_tilde_max:.4f}]")

# one recorded path: trades only happen when the ratio sits on a boundary
rec = simulate_path(params, sol, PathConfig(T=5.0, dt=1e-3, n_paths=1, seed=1))
trades = np.nonzero(np.diff(rec.phi))[0]
print(f"{trades.size} trading steps out of {rec.phi.size - 1}")

# occupation of S/m against the stationary law
params = params_from_theta(0.5, 0.05, sigma=0.4)
sol = solve(params)
long = simulate_paths(params, sol, PathConfig(T=500.0, dt=1e-3, n_paths=1, seed=0))
q = np.diff(stationary_cdf(long.hist_edges, sol))
print("total variation vs stationary law:", round(0.5 * float(np.abs(long.occupation() - q).sum()), 4))
