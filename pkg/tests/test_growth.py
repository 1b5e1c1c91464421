import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shadowprice import (DomainError, UnsupportedRegime, growth_rate_closed,
                         growth_rate_quadrature, growth_report, params_from_theta, solve,
                         stationary_cdf, stationary_density)
from shadowprice.growth import growth_integrand, stationary_mass

from conftest import MATRIX, SIGMA, cell_id

# (theta, sigma, lam) -> delta from a 30-digit mpmath quadrature of the
# stationary average, using an mpmath root for c
ORACLE = {
    (0.5, 0.4, 0.01): 0.019524858162103178002,
    (2.0, 0.4, 0.05): 0.30000316515862494447,
    (0.3, 0.4, 0.1): 0.0055660854211220023147,
    (0.7, 1.0, 0.001): 0.24448741920913399921,
}


@pytest.mark.parametrize("key", sorted(ORACLE))
def test_against_high_precision_quadrature(key):
    theta, sigma, lam = key
    sol = solve(params_from_theta(theta, lam, sigma))
    assert growth_rate_closed(sol, sigma) == pytest.approx(ORACLE[key], rel=1e-12)
    assert growth_rate_quadrature(sol, sigma) == pytest.approx(ORACLE[key], rel=1e-10)


def test_reference_value_quoted_approximately():
    sol = solve(params_from_theta(0.5, 0.01, 0.4))
    assert growth_rate_closed(sol, 0.4) == pytest.approx(0.019528, abs=5e-6)


@pytest.mark.parametrize("cell", MATRIX, ids=cell_id)
def test_closed_form_matches_quadrature(cell, solutions):
    rep = growth_report(solutions[cell])
    assert rep.relative_gap < 1e-10
    assert 0 < rep.delta_closed < rep.delta_frictionless


@pytest.mark.parametrize("cell", MATRIX, ids=cell_id)
def test_stationary_law(cell, solutions):
    sol = solutions[cell]
    assert stationary_mass(sol) == pytest.approx(1.0, abs=1e-12)
    lo, hi = sol.domain
    assert stationary_cdf(lo, sol) == pytest.approx(0.0, abs=1e-15)
    assert stationary_cdf(hi, sol) == pytest.approx(1.0, abs=1e-12)
    s = np.linspace(lo, hi, 7)[1:-1]
    h = 1e-6 * s
    fd = (stationary_cdf(s + h, sol) - stationary_cdf(s - h, sol)) / (2 * h)
    np.testing.assert_allclose(fd, stationary_density(s, sol), rtol=1e-7)


def test_integrand_at_boundaries_is_frictionless_rate():
    # at S/m = 1 the local Merton fraction is 1/(1+c), and the local rate is
    # (mu_tilde/sigma_tilde)^2 / 2
    sol = solve(params_from_theta(0.5, 0.01, SIGMA))
    val = growth_integrand(1.0, sol, SIGMA)
    assert val == pytest.approx(SIGMA ** 2 / (2 * (1 + sol.c) ** 2), rel=1e-14)


def test_degenerate():
    sol = solve(params_from_theta(1.0, 0.01, 0.4))
    assert growth_rate_closed(sol, 0.4) == pytest.approx(0.08)
    assert growth_rate_quadrature(sol, 0.4) == pytest.approx(0.08)
    with pytest.raises(UnsupportedRegime):
        stationary_density(1.0, sol)


def test_density_domain():
    sol = solve(params_from_theta(0.7, 0.01))
    with pytest.raises(DomainError):
        stationary_density(0.5, sol)


def test_near_half_warning():
    sol = solve(params_from_theta(0.5 + 1e-8, 0.01))
    with pytest.warns(RuntimeWarning):
        d = growth_rate_closed(sol, 1.0)
    half = growth_rate_closed(solve(params_from_theta(0.5, 0.01)), 1.0)
    assert d == pytest.approx(half, rel=1e-5)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 4.0).filter(lambda x: abs(x - 1) > 0.02 and abs(x - 0.5) > 1e-3),
       st.floats(1e-5, 0.3), st.floats(0.1, 2.0))
def test_growth_properties(theta, lam, sigma):
    sol = solve(params_from_theta(theta, lam, sigma))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        closed = growth_rate_closed(sol, sigma)
    quad = growth_rate_quadrature(sol, sigma)
    frictionless = theta ** 2 * sigma ** 2 / 2
    assert abs(closed - quad) <= 1e-9 * frictionless
    assert 0 < closed < frictionless
