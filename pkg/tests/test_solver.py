import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shadowprice import (ConvergenceError, DomainError, UnsupportedRegime, admissibility_margin,
                         friction_gap, params_from_theta, scan_lambda0, solve, solve_c)
from shadowprice.solver import bracket, degenerate_solution, s_bar_of_c, sign_changes

from conftest import MATRIX, cell_id

# (theta, lam) -> (c, s_bar): roots of f found with mpmath at 40 digits
ORACLE = {
    (0.1, 0.001): (11.21403564849897966, 1.5036248135083124424),
    (0.3, 0.05): (4.4039125971597191977, 3.2878795079747092111),
    (0.5, 0.01): (1.3644389074070186073, 1.880498517218241108),
    (0.7, 0.1): (0.7950495808080053202, 4.740148975544675403),
    (0.9, 0.01): (0.16030704334582141908, 2.4565099794348774839),
    (1.5, 0.05): (-0.19330257689231755942, 0.47107545778557409641),
    (2.0, 0.001): (-0.46135127754324199223, 0.86567148680797846677),
    (3.0, 0.1): (-0.43138301726440532256, 0.62718955178314809619),
}


@pytest.mark.parametrize("cell", sorted(ORACLE), ids=cell_id)
def test_against_high_precision_roots(cell):
    sol = solve(params_from_theta(*cell))
    c, s = ORACLE[cell]
    assert sol.c == pytest.approx(c, rel=1e-12)
    assert sol.s_bar == pytest.approx(s, rel=1e-12)


def test_reference_point_mu_sigma():
    sol = solve(params_from_theta(0.5, 0.01, 0.4))
    assert sol.c == pytest.approx(1.3644389074070186, rel=1e-13)
    assert sol.s_bar == pytest.approx(1.8804985172182411, rel=1e-13)
    assert sol.pi_lo == pytest.approx(0.42293332124899713, rel=1e-13)
    assert sol.pi_hi == pytest.approx(0.57951765200384697, rel=1e-13)
    # figures quoted as approximate in the CLI example
    assert sol.c == pytest.approx(1.3635, abs=2e-3)
    assert sol.s_bar == pytest.approx(1.8779, abs=5e-3)


@pytest.mark.parametrize("cell", MATRIX, ids=cell_id)
def test_root_and_bracket(cell, solutions):
    sol = solutions[cell]
    lo, hi = bracket(cell[0])
    assert lo < sol.c < hi
    assert abs(friction_gap(sol.c, sol.params)) < 1e-12
    assert sol.s_bar == pytest.approx(s_bar_of_c(sol.c, sol.params), rel=1e-15)
    assert (sol.s_bar > 1.0) == (cell[0] < 1.0)


@pytest.mark.parametrize("cell", MATRIX, ids=cell_id)
def test_unique_sign_change(cell):
    assert sign_changes(params_from_theta(*cell)) == 1


def test_check_unique_flag():
    sol = solve_c(params_from_theta(0.3, 0.01), check_unique=True)
    assert sol.c > 7.0 / 3.0


def test_tiny_lambda():
    sol = solve(params_from_theta(0.5, 1e-8))
    assert sol.c == pytest.approx(1.0, abs=1e-2)
    assert abs(friction_gap(sol.c, sol.params)) < 1e-12


def test_degenerate():
    sol = solve(params_from_theta(1.0, 0.01, 0.4))
    assert sol.degenerate and sol.c == 0.0 and math.isinf(sol.s_bar)
    assert sol.pi_lo == sol.pi_hi == sol.shadow_pi_lo == sol.shadow_pi_hi == 1.0
    assert admissibility_margin(sol) == 1.0
    with pytest.raises(UnsupportedRegime):
        solve_c(sol.params)
    with pytest.raises(UnsupportedRegime):
        degenerate_solution(params_from_theta(0.5, 0.01))


def test_friction_gap_outside_bracket():
    p = params_from_theta(0.5, 0.01)
    with pytest.raises(DomainError):
        friction_gap(0.5, p)


def test_scan_lambda0():
    # margin 1 - lam*shadow_pi_hi > 0 whenever shadow_pi_hi < 1/lam
    assert scan_lambda0(0.5) is None
    lam0 = scan_lambda0(3.0)
    assert lam0 is None or 0 < lam0 < 1


@settings(max_examples=60, deadline=None)
@given(st.floats(0.02, 6.0).filter(lambda t: abs(t - 1) > 1e-3),
       st.floats(1e-6, 0.5))
def test_solution_properties(theta, lam):
    sol = solve(params_from_theta(theta, lam))
    if abs(theta - 1) > 0.05 and lam <= 0.2:
        assert abs(friction_gap(sol.c, sol.params)) < 1e-12
    assert abs(sol.symmetry_residual) < 1e-10
    # the shadow no-trade region is symmetric about theta and contains it
    assert sol.shadow_pi_lo < theta < sol.shadow_pi_hi
    assert sol.pi_lo < sol.pi_hi


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 4.0).filter(lambda t: abs(t - 1) > 1e-2),
       st.floats(1e-5, 0.2), st.floats(1.5, 4.0))
def test_shadow_region_widens_with_cost(theta, lam, factor):
    a = solve(params_from_theta(theta, lam))
    b = solve(params_from_theta(theta, min(lam * factor, 0.9)))
    assert b.shadow_pi_hi - b.shadow_pi_lo > a.shadow_pi_hi - a.shadow_pi_lo


@pytest.mark.parametrize("theta, lam", [(0.02, 0.99), (0.5 + 1e-7, 0.01), (0.5 - 1e-7, 0.3),
                                        (0.98, 0.5), (1.001, 0.5), (6.0, 0.99)])
def test_extreme_parameters(theta, lam):
    sol = solve(params_from_theta(theta, lam))
    assert abs(sol.symmetry_residual) < 1e-12 * max(1.0, theta)
    assert np.isfinite([sol.c, sol.s_bar, sol.pi_lo, sol.pi_hi]).all()


def test_near_half_is_continuous():
    mid = solve(params_from_theta(0.5, 0.01))
    for eps in (1e-7, -1e-7, 1e-10):
        near = solve(params_from_theta(0.5 + eps, 0.01))
        assert near.c == pytest.approx(mid.c, abs=10 * abs(eps))
        assert near.s_bar == pytest.approx(mid.s_bar, abs=10 * abs(eps))


def test_unrepresentable_root():
    # theta -> 1 with large costs: c is within rounding of the bracket edge
    with pytest.raises(ConvergenceError, match="representable"):
        solve(params_from_theta(0.999, 0.5))


def test_errors_are_typed():
    assert issubclass(ConvergenceError, RuntimeError)
    with pytest.raises(DomainError):
        params_from_theta(-1.0, 0.1)
