"""Right-hand side, RK4 stepping, velocity recovery, diagnostics.

The main oracle is the traveling line wave: for an exact solitary wave
the instantaneous tendency of every prognostic field must equal -c times
its x-derivative, which checks the Bernoulli head and the depth flux
against closed forms that never touch this module.
"""

import numpy as np
import pytest

from sgn2d.dynamics import (
    CAVITATION_FLOOR,
    Diagnostics,
    PhysicalParams,
    State,
    StepStats,
    compute_rhs,
    conserved_quantities,
    curl_deviation,
    recover_velocity,
    rk4_step,
)
from sgn2d.errors import CavitationError, ParameterError
from sgn2d.initdata import gaussian_hump, line_wave_2d, rest_state
from sgn2d.spectral import derivative, make_grid


@pytest.fixture(scope="module")
def wave_state():
    g = make_grid(1024, 8, 10.0, 1.0)
    return line_wave_2d(g, c=1.7), PhysicalParams()


class TestPhysicalParams:
    def test_validation(self):
        with pytest.raises(ParameterError):
            PhysicalParams(g=0.0)
        with pytest.raises(ParameterError):
            PhysicalParams(h_inf=-1.0)

    def test_defaults(self):
        p = PhysicalParams()
        assert p.g == 1.0 and p.h_inf == 1.0


class TestComputeRhs:
    def test_rest_state_is_a_fixed_point(self, grid64):
        params = PhysicalParams()
        dh, dvx, dvy, sigma, _ = compute_rhs(rest_state(grid64, params), params)
        assert np.abs(dh).max() < 1e-13
        assert np.abs(dvx).max() < 1e-13
        assert np.abs(dvy).max() < 1e-13
        assert np.array_equal(sigma, np.zeros(grid64.shape))

    def test_traveling_wave_tendency(self, wave_state):
        # d/dt of an exact translate is -c * d/dx of the field.
        state, params = wave_state
        g = state.grid
        c = 1.7
        dh, dvx, dvy, _, stats = compute_rhs(state, params)
        assert stats.converged
        assert np.abs(dh + c * derivative(g, state.h, "x")).max() < 1e-8
        assert np.abs(dvx + c * derivative(g, state.vx, "x")).max() < 1e-8
        assert np.abs(dvy).max() < 1e-10

    def test_cavitation_guard(self, grid64):
        params = PhysicalParams()
        state = rest_state(grid64, params)
        h = state.h.copy()
        h[5, 5] = 0.5 * CAVITATION_FLOOR
        shallow = State(grid64, 0.0, h, state.vx, state.vy)
        with pytest.raises(CavitationError):
            compute_rhs(shallow, params)


class TestRk4Step:
    def test_rejects_nonpositive_dt(self, grid64):
        params = PhysicalParams()
        with pytest.raises(ParameterError):
            rk4_step(rest_state(grid64, params), 0.0, params)

    def test_advances_clock_and_reports_stats(self, grid64):
        params = PhysicalParams()
        state = gaussian_hump(grid64, 1.5, params)
        new, stats = rk4_step(state, 0.01, params)
        assert new.t == pytest.approx(0.01)
        assert isinstance(stats, StepStats)
        assert stats.iterations > 0
        assert stats.max_residual <= 1e-12
        assert new.sigma is not None

    def test_rest_state_stays_at_rest(self, grid64):
        params = PhysicalParams()
        state = rest_state(grid64, params)
        for _ in range(3):
            state, _ = rk4_step(state, 0.05, params)
        assert np.abs(state.h - params.h_inf).max() < 1e-13
        assert np.abs(state.vx).max() < 1e-13
        assert np.abs(state.vy).max() < 1e-13

    def test_wave_translates_and_conserves(self):
        g = make_grid(256, 8, 10.0, 1.0)
        params = PhysicalParams()
        state = line_wave_2d(g, c=1.7)
        d0 = conserved_quantities(state, params)
        dt = 0.01
        for _ in range(10):
            state, _ = rk4_step(state, dt, params)
        d1 = conserved_quantities(state, params)
        assert abs(d1.energy - d0.energy) <= 1e-10 * abs(d0.energy)
        assert abs(d1.mass - d0.mass) <= 1e-12 * max(abs(d0.mass), 1.0)
        # Crest has moved by c*t = 0.17: the argmax node must follow.
        moved = g.x[np.argmax(state.h[:, 0])]
        assert abs(moved - 1.7 * dt * 10) <= g.dx

    def test_curl_free_update(self):
        # The velocity update is a spectral gradient: a curl-free start
        # stays curl-free to rounding even after filtered steps.
        g = make_grid(64, 64, 2.0, 2.0)
        params = PhysicalParams()
        state = gaussian_hump(g, 2.0, params)
        assert curl_deviation(state) == 0.0
        for _ in range(3):
            state, _ = rk4_step(state, 0.01, params)
        # The Krasny filter may zero a coefficient of vx but not vy, so
        # "exactly zero" relaxes to the filter's own noise floor.
        assert curl_deviation(state) < 1e-11


class TestRecoverVelocity:
    def test_matches_solitary_wave_closed_form(self, wave_state):
        state, params = wave_state
        from sgn2d.initdata import solitary_wave_profile

        _, u_exact, _, _ = solitary_wave_profile(state.grid.x, 1.7)
        ux, uy = recover_velocity(state)
        assert np.abs(ux - u_exact[:, None]).max() < 1e-9
        assert np.abs(uy).max() < 1e-10

    def test_zero_for_state_at_rest(self, grid64):
        params = PhysicalParams()
        ux, uy = recover_velocity(rest_state(grid64, params))
        assert np.abs(ux).max() == 0.0
        assert np.abs(uy).max() == 0.0

    def test_solves_when_cache_missing(self, grid64):
        params = PhysicalParams()
        base = gaussian_hump(grid64, 1.3, params)
        bare = State(grid64, 0.0, base.h, base.vx, base.vy, sigma=None)
        ux0, _ = recover_velocity(base)
        ux1, _ = recover_velocity(bare)
        assert np.abs(ux0 - ux1).max() < 1e-12


class TestConservedQuantities:
    def test_gaussian_hump_closed_forms(self):
        # mass = (alpha - 1) * integral exp(-r^2) = 3 pi for alpha = 4;
        # at rest the energy is purely potential:
        # g/2 * (alpha-1)^2 * integral exp(-2 r^2) = 9 pi / 4.
        g = make_grid(256, 256, 5.0, 5.0)
        params = PhysicalParams()
        state = gaussian_hump(g, 4.0, params)
        d = conserved_quantities(state, params)
        assert d.mass == pytest.approx(3.0 * np.pi, rel=1e-12)
        assert d.energy == pytest.approx(9.0 * np.pi / 4.0, rel=1e-12)
        assert abs(d.px) < 1e-12
        assert abs(d.py) < 1e-12
        assert d.hmax == pytest.approx(4.0)
        assert d.hmin == pytest.approx(1.0, abs=1e-9)

    def test_momentum_of_traveling_wave_is_positive_x(self, wave_state):
        state, params = wave_state
        d = conserved_quantities(state, params, gmres_iters=7)
        assert d.px > 0.0
        assert abs(d.py) < 1e-10
        assert d.gmres_iters == 7
        assert isinstance(d, Diagnostics)
