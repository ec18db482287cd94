"""Stabilized fixed-point solver and the elliptic-profile identities."""

import math

import numpy as np
import pytest

from nlsdamp import (
    ComplexField,
    ConvergenceError,
    Grid,
    GroundState,
    closed_form_q_1d,
    norms,
    pohozaev_residuals,
    solve_ground_state,
)
from nlsdamp.ground_state import pde_residual

TOL = {
    "profile_sup": 1e-8,
    "integrals": 1e-6,
    "energy": 1e-9,
    "pohozaev": 1e-8,
    "residual_restate": 1e-12,
    "ode_pointwise": 1e-6,
    "n_doubling": 1e-8,
    "d2_mass": 1e-6,
}

Q_MASS_SQ = math.pi * math.sqrt(3.0) / 2.0
Q_GRAD_SQ = math.pi * math.sqrt(3.0) / 4.0
Q_LP = 3.0 * math.pi * math.sqrt(3.0) / 4.0
# Converged value on the 256-point, half-width-15 two-dimensional grid.
D2_MASS_SQ = 11.700896524497164


def test_profile_matches_closed_form(gs_1d):
    exact = closed_form_q_1d(gs_1d.grid.axis)
    assert np.max(np.abs(gs_1d.profile - exact)) < TOL["profile_sup"]


def test_integrals_match_closed_forms(gs_1d):
    assert abs(gs_1d.mass_sq - Q_MASS_SQ) < TOL["integrals"]
    assert abs(gs_1d.grad_sq - Q_GRAD_SQ) < TOL["integrals"]
    assert abs(gs_1d.lp_power - Q_LP) < TOL["integrals"]
    assert abs(gs_1d.energy) < TOL["energy"]


def test_pohozaev_residuals_vanish(gs_1d):
    res = pohozaev_residuals(gs_1d)
    assert res.energy_res < TOL["pohozaev"]
    assert res.gradient_res < TOL["pohozaev"]


def test_stored_residual_restates(gs_1d):
    assert gs_1d.residual < 1e-10
    again = pde_residual(gs_1d.grid, gs_1d.profile)
    assert abs(again - gs_1d.residual) < TOL["residual_restate"]


def test_pohozaev_rejects_wrong_scale(gs_1d):
    # Doubling the profile scales grad by 4 and the sextic integral by 64,
    # leaving normalized defects of exactly 7.5 and 45 in the limit.
    doubled = ComplexField(gs_1d.grid, 2.0 * gs_1d.profile)
    nm = norms(doubled)
    fake = GroundState(gs_1d.grid, 2.0 * gs_1d.profile, nm.mass_sq, nm.grad_sq, nm.lp_power, 0.0)
    res = pohozaev_residuals(fake)
    assert res.energy_res == pytest.approx(7.5, rel=1e-6)
    assert res.gradient_res == pytest.approx(45.0, rel=1e-6)


def test_closed_form_satisfies_ode_pointwise():
    # Richardson-extrapolated second difference of Q'' - Q + Q^5 at two points.
    def residual(x):
        def second(h):
            q = closed_form_q_1d
            return (q(x + h) - 2.0 * q(x) + q(x - h)) / (h * h)

        h = 1e-2
        qxx = (4.0 * second(h) - second(2.0 * h)) / 3.0
        q0 = closed_form_q_1d(x)
        return float(qxx - q0 + q0**5)

    assert abs(residual(0.3)) < TOL["ode_pointwise"]
    assert abs(residual(1.0)) < TOL["ode_pointwise"]


def test_closed_form_decays_without_overflow():
    vals = closed_form_q_1d(np.array([0.0, 50.0, 500.0]))
    assert vals[0] == pytest.approx(3.0**0.25, rel=1e-14)
    assert np.all(np.isfinite(vals))
    assert vals[2] < 1e-200 or vals[2] == 0.0


def test_n_doubling_stability_1d(gs_1d):
    coarse = solve_ground_state(Grid(1, 256, 20.0), tol=1e-10)
    assert abs(coarse.mass_sq - gs_1d.mass_sq) < TOL["n_doubling"] * gs_1d.mass_sq


def test_d2_mass_value(gs_2d):
    assert abs(gs_2d.mass_sq - D2_MASS_SQ) < TOL["d2_mass"]
    res = pohozaev_residuals(gs_2d)
    assert res.energy_res < TOL["pohozaev"]
    assert res.gradient_res < TOL["pohozaev"]


def test_custom_initial_converges():
    grid = Grid(1, 512, 20.0)
    gs = solve_ground_state(grid, tol=1e-10, initial=closed_form_q_1d(grid.axis))
    assert abs(gs.mass_sq - Q_MASS_SQ) < TOL["integrals"]


def test_max_iter_exhaustion_reports_residual():
    with pytest.raises(ConvergenceError) as info:
        solve_ground_state(Grid(1, 128, 12.0), tol=1e-14, max_iter=1)
    assert info.value.residual is not None
    assert info.value.residual > 1e-14


def test_zero_initial_collapses():
    grid = Grid(1, 64, 10.0)
    with pytest.raises(ConvergenceError, match="larger initial amplitude"):
        solve_ground_state(grid, initial=np.zeros(grid.shape))


def test_argument_validation():
    grid = Grid(1, 64, 10.0)
    with pytest.raises(ValueError):
        solve_ground_state(grid, tol=0.0)
    with pytest.raises(ValueError):
        solve_ground_state(grid, max_iter=0)
    with pytest.raises(ValueError):
        solve_ground_state(grid, initial=np.zeros(32))


def test_field_view_is_complex(gs_1d):
    f = gs_1d.field()
    assert f.values.dtype == np.complex128
    assert np.max(np.abs(f.values.imag)) == 0.0
