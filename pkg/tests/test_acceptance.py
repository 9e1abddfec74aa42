"""End-to-end checks at their stated scales, one numbered verdict each.

Every test here drives a full experiment (or the closed-form machinery)
and records a PASS/FAIL line that the terminal summary prints with the
measured values, so a red criterion still reports its numbers.  The
module takes roughly an hour on one core; deselect it with
`-m "not acceptance"` while iterating on the unit suite.

Scale notes: the CI-scale preset variants carry the 2/3-rule dealias
mask (see preset_config); at a quarter of the reference resolution the
aliased nonlinear terms otherwise grow until the run cavitates.  The
2^9 collapse run is a plain resolution override of the gauss preset and
keeps the preset's own filters (Krasny only, mask off): the mask costs
a third of the band, and the collapse endgame visibly flattens without
those modes.

Setting SGN2D_FULL_ACCEPTANCE=1 additionally runs the full-resolution
line-wave check (hours, not minutes).
"""

import math
import os

import numpy as np
import pytest

from sgn2d.analysis import (
    diff_line_wave,
    fit_radial_collapse,
    locate_crest,
    polar_velocity,
    radial_collapse_residuals,
)
from sgn2d.dynamics import PhysicalParams, rk4_step
from sgn2d.elliptic import SigmaOperator, solve_sigma
from sgn2d.harness import preset_config, run_experiment
from sgn2d.initdata import gaussian_hump, line_wave_2d, solitary_wave_profile
from sgn2d.spectral import integrate, make_grid

pytestmark = pytest.mark.acceptance

FULL = os.environ.get("SGN2D_FULL_ACCEPTANCE", "") not in ("", "0")

CI_PRESETS = ("line", "soldef", "solgauss-plus", "solgauss-minus",
              "cross", "gauss")


def _wrap(offset, L):
    period = 2.0 * math.pi * L
    return (offset + 0.5 * period) % period - 0.5 * period


def _run(cfg):
    try:
        return run_experiment(cfg)
    except Exception as exc:  # rejected initial data reports as FAIL below
        return exc


def _failed(run):
    """FAIL detail for a run that raised or aborted, else None."""
    if isinstance(run, Exception):
        return f"run raised {type(run).__name__}: {run}"
    if run.error is not None:
        return f"run aborted at t = {run.t_final:.4g}: {run.error}"
    return None


@pytest.fixture(scope="session")
def collapse_run():
    return _run(preset_config("gauss", Nx=512, Ny=512, snap_times=()))


@pytest.fixture(scope="session")
def ci_runs():
    return {
        name: _run(preset_config(name, scale="ci", cadence=100,
                                 snap_times=()))
        for name in CI_PRESETS
    }


def _translation_error(run):
    state = run.final_state
    cfg = run.config
    xi = _wrap(state.grid.x - cfg.x0 - cfg.c * state.t, state.grid.Lx)
    h_exact, _, _, _ = solitary_wave_profile(xi, cfg.c)
    return float(np.abs(state.h - h_exact[:, None]).max())


def test_criterion_1_line_wave_translation(criterion):
    run = _run(preset_config("line", Nx=512, Ny=32, snap_times=()))
    fail = _failed(run)
    if fail:
        criterion(1, False, fail)
    err = _translation_error(run)
    detail = f"max|h - exact translate| = {err:.3e} (gate 1e-08)"
    ok = err <= 1e-8

    if FULL:
        # The tighter gate needs the time step shrunk along with the
        # grid: the translation error is dt^4-dominated at these
        # resolutions, so Nt scales with the demanded accuracy.
        full = _run(preset_config("line", Nt=6000, snap_times=()))
        fail = _failed(full)
        if fail:
            criterion(1, False, detail + "; full run: " + fail)
        err_full = _translation_error(full)
        ok = ok and err_full <= 1e-10
        detail += f"; full resolution {err_full:.3e} (gate 1e-10)"

    criterion(1, ok, detail)


def test_criterion_2_conservation_at_ci_scale(ci_runs, criterion):
    gate = 1e-7
    parts = []
    ok = True
    for name in CI_PRESETS:
        run = ci_runs[name]
        fail = _failed(run)
        if fail:
            ok = False
            parts.append(f"{name}: {fail}")
            continue
        worst = max(run.mass_drift, run.px_drift,
                    run.py_drift, run.energy_drift)
        ok = ok and worst <= gate
        parts.append(f"{name} {worst:.1e}")
    criterion(2, ok, f"worst relative drift per preset (gate {gate:g}): "
              + ", ".join(parts))


def test_criterion_3_collapse_fit(collapse_run, criterion):
    fail = _failed(collapse_run)
    if fail:
        criterion(3, False, fail)
    t = np.array([d.t for d in collapse_run.diagnostics])
    hmin = np.array([d.hmin for d in collapse_run.diagnostics])
    try:
        fit = fit_radial_collapse((t, hmin), t_min=3.75)
    except Exception as exc:
        criterion(3, False, f"fit failed: {exc}")
    ok = (abs(fit.a - 0.1545) <= 0.05 * 0.1545
          and abs(fit.b - (-0.5117)) <= 0.05 * 0.5117
          and fit.residual <= 5e-3)
    criterion(3, ok,
              f"a = {fit.a:.4f} (want 0.1545 +-5%), "
              f"b = {fit.b:.4f} (want -0.5117 +-5%), "
              f"residual = {fit.residual:.2e} (gate 5e-3)")


def test_criterion_4_depression_onset(collapse_run, criterion):
    fail = _failed(collapse_run)
    if fail:
        criterion(4, False, fail)
    t = np.array([d.t for d in collapse_run.diagnostics])
    hmin = np.array([d.hmin for d in collapse_run.diagnostics])
    # Outgoing ripples keep the infimum a few 1e-7 below the rest depth
    # from the first steps, so "crosses h_inf" is measured against a
    # level visibly below it; the descent is steep enough (0.1 per 0.1
    # time units) that the choice of level barely moves the answer.
    level = 1.0 - 1e-3
    below = np.nonzero(hmin < level)[0]
    if below.size == 0 or below[0] == 0:
        criterion(4, False, f"infimum never descends through {level}")
    i = below[0]
    t_cross = t[i - 1] + (level - hmin[i - 1]) * (t[i] - t[i - 1]) \
        / (hmin[i] - hmin[i - 1])
    criterion(4, abs(t_cross - 2.5) <= 0.2,
              f"infimum descends through {level} at t = {t_cross:.3f} "
              f"(want 2.5 +-0.2)")


def test_criterion_5_azimuthal_smallness(collapse_run, criterion):
    fail = _failed(collapse_run)
    if fail:
        criterion(5, False, fail)
    _, u_phi = polar_velocity(collapse_run.final_state)
    peak = float(np.abs(u_phi).max())
    criterion(5, peak <= 1e-5,
              f"max|u_phi| = {peak:.3e} at t = {collapse_run.t_final:g} "
              f"(gate 1e-5)")


def test_criterion_6_transverse_stability(ci_runs, criterion):
    run = ci_runs["soldef"]
    fail = _failed(run)
    if fail:
        criterion(6, False, fail)
    state = run.final_state
    crest = locate_crest(state.grid, state.h)
    dh, dux, (norm_h, norm_u) = diff_line_wave(state, run.config.c, crest.x)
    # Radiation amplitude: the difference field away from the crest.
    # "No residual crest" means the global norms do not exceed it, i.e.
    # the difference peaks in the radiation, not under the crest.
    off = _wrap(state.grid.x - crest.x, state.grid.Lx)
    far = np.abs(off) > 3.0
    rad_h = float(np.abs(dh[far, :]).max())
    rad_u = float(np.abs(dux[far, :]).max())
    ok = (abs(crest.x - 6.995) <= 0.1
          and norm_h <= rad_h * (1.0 + 1e-12)
          and norm_u <= rad_u * (1.0 + 1e-12))
    criterion(6, ok,
              f"x_s = {crest.x:.3f} (want 6.995 +-0.1), "
              f"|dh| = {norm_h:.2e} vs radiation {rad_h:.2e}, "
              f"|dux| = {norm_u:.2e} vs radiation {rad_u:.2e}")


def test_criterion_7_elliptic_properties(criterion, grid_square, smooth_field):
    grid = grid_square
    h = 1.0 + 0.3 * smooth_field(grid)
    u = smooth_field(grid)
    w = smooth_field(grid)
    op = SigmaOperator(grid, h)
    lu, lw = op.apply(u), op.apply(w)
    uw = integrate(grid, lu * w)
    wu = integrate(grid, u * lw)
    sym = abs(uw - wu) / max(abs(uw), abs(wu))
    positive = integrate(grid, lu * u) > 0.0 and integrate(grid, lw * w) > 0.0

    ones = np.ones(grid.shape)
    _, stats = solve_sigma(grid, ones, u, w)
    one_iter = stats.iterations == 1

    wave_grid = make_grid(512, 8, 10.0, 2.0)
    state = line_wave_2d(wave_grid, 1.7)
    xi = _wrap(wave_grid.x, wave_grid.Lx)
    _, _, sigma_exact, _ = solitary_wave_profile(xi, 1.7)
    sigma_err = float(np.abs(state.sigma - sigma_exact[:, None]).max())

    ok = sym <= 1e-12 and positive and one_iter and sigma_err <= 1e-10
    criterion(7, ok,
              f"self-adjointness {sym:.1e} (gate 1e-12), positive: "
              f"{positive}, h=1 solve iterations = {stats.iterations} "
              f"(want 1), solitary sigma error {sigma_err:.1e} (gate 1e-10)")


def test_criterion_8_rk4_self_convergence(criterion):
    params = PhysicalParams()
    grid = make_grid(128, 128, 5.0, 5.0)
    finals = []
    for nt in (20, 40, 80, 160):
        state = gaussian_hump(grid, 4.0, params)
        dt = 0.5 / nt
        # Filter off: per-step rounding cleanup scales with Nt and would
        # mask the Nt^-4 self-differences this measures.
        for _ in range(nt):
            state, _ = rk4_step(state, dt, params, krasny_threshold=0.0)
        finals.append(state.h)
    d = [float(np.abs(a - b).max()) for a, b in zip(finals, finals[1:])]
    orders = [math.log2(d[i] / d[i + 1]) for i in range(len(d) - 1)]
    ok = all(abs(p - 4.0) <= 0.3 for p in orders)
    criterion(8, ok, "observed orders "
              + ", ".join(f"{p:.2f}" for p in orders) + " (want 4.0 +-0.3)")


def test_criterion_9_radial_solution_residuals(criterion):
    t = np.linspace(0.0, 1.4, 8)[:, None]
    r = np.linspace(0.0, 4.0, 9)[None, :]
    worst = 0.0
    for h0, c0, w0 in ((1.0, 1.0, -0.35), (0.7, 1.2, 0.25), (2.0, 1.5, -0.5)):
        mass, momentum = radial_collapse_residuals(t, r, h0, c0, w0)
        worst = max(worst, float(np.abs(mass).max()),
                    float(np.abs(momentum).max()))
    criterion(9, worst < 1e-12,
              f"max closed-form residual = {worst:.2e} (gate 1e-12)")
