"""
The no-trade region
===================

Solve for the constant c and the upper reflection level s_bar, then look
at how the buy and sell boundaries open up around the Merton ratio as the
cost grows.
"""

import numpy as np

from shadowprice import ShadowTransform, params_from_theta, solve

# a single cell: Merton ratio 1/2, one percent cost
sol = solve(params_from_theta(0.5, 0.01, sigma=0.4))
print(f"c = {sol.c:.12f}   s_bar = {sol.s_bar:.12f}")
print(f"trade when the stock fraction leaves [{sol.pi_lo:.5f}, {sol.pi_hi:.5f}]")

# g pastes smoothly onto the bid and ask prices at both ends
t = ShadowTransform(sol)
print("g(1), g'(1)           :", t.g(1.0), t.g_prime(1.0))
print("g(s_bar)/s_bar, g'(s_bar):", t.g(sol.s_bar) / sol.s_bar, t.g_prime(sol.s_bar))

# width against cost for a few Merton ratios
lams = np.geomspace(1e-4, 0.1, 7)
print("\nlambda    " + "".join(f"theta={th:<6}" for th in (0.3, 0.7, 2.0)))
for lam in lams:
    row = []
    for th in (0.3, 0.7, 2.0):
        s = solve(params_from_theta(th, lam))
        row.append(s.pi_hi - s.pi_lo)
    print(f"{lam:8.1e}  " + "".join(f"{w:<12.5f}" for w in row))

# the width grows like lam^(1/3): the ratio below settles down
w = np.array([(lambda s: s.pi_hi - s.pi_lo)(solve(params_from_theta(0.5, l))) for l in lams])
print("\nwidth / lam^(1/3) at theta = 0.5:", np.round(w / lams ** (1 / 3), 4))
