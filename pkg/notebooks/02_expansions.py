"""
Small-cost expansions
=====================

Power series in lam^(1/3) for c, the boundaries and the growth rate,
compared with the exact solver.
"""

import numpy as np

from shadowprice import (evaluate, expand_ansatz, expand_boundaries, expand_c, expand_growth,
                         growth_rate_closed, optimal_truncation, params_from_theta, solve)
from shadowprice.asymptotics import truncation_errors

theta, sigma = 0.5, 0.4
b = expand_boundaries(theta, 6)
print("powers of lam^(1/3):  0        1        2        3")
print("pi_lo  ", np.round(b.lo.coeffs[:4], 5))
print("pi_hi  ", np.round(b.hi.coeffs[:4], 5))
print("width  ", np.round(b.width.coeffs[:4], 5))
g = expand_growth(theta, sigma, 6)
print("growth ", np.round(g.coeffs[:4], 6), " (the lam^(1/3) and lam terms vanish)")

# the ansatz route rebuilds the same coefficients independently
c_ans, _ = expand_ansatz(theta, 6)
print("\nmax |pipeline - ansatz| for c:", np.max(np.abs(expand_c(theta, 6).coeffs - c_ans.coeffs)))

# truncation error of the growth rate against the exact value
for lam in (1e-2, 1e-3, 1e-4):
    exact = growth_rate_closed(solve(params_from_theta(theta, lam, sigma)), sigma)
    errs = [abs(exact - evaluate(g, lam, k)) for k in (2, 3, 4)]
    print(f"lam={lam:7.0e}  delta={exact:.10f}  errors K=2,3,4: " + "  ".join(f"{e:.2e}" for e in errs))

# adding terms keeps helping even at moderate cost
print("\nerrors of c by order at lam = 0.1:", np.array2string(truncation_errors(theta, 0.1, 8), precision=2))
print("best order up to 12 at lam = 0.3:", optimal_truncation(theta, 0.3))
