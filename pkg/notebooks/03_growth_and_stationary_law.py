"""
Growth rate and the stationary law
==================================

The closed-form growth rate against its quadrature representation, and
the stationary density of the reflected ratio.
"""

import numpy as np

from shadowprice import (growth_report, params_from_theta, solve, stationary_cdf,
                         stationary_density)

for theta in (0.3, 0.5, 0.7, 1.5):
    sol = solve(params_from_theta(theta, 0.01, sigma=0.4))
    r = growth_report(sol)
    print(f"theta={theta}: closed {r.delta_closed:.12f}  quadrature {r.delta_quadrature:.12f}  "
          f"loss vs frictionless {1 - r.delta_closed / r.delta_frictionless:.3%}")

# the stationary density is a power law on [1, s_bar]
sol = solve(params_from_theta(0.7, 0.05, sigma=0.4))
s = np.linspace(*sol.domain, 6)
print("\ns        ", np.round(s, 4))
print("density  ", np.round(stationary_density(s, sol), 4))
print("cdf      ", np.round(stationary_cdf(s, sol), 4))
