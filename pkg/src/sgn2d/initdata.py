"""Initial-condition generators.

Every generator returns a consistent State: the depth and tangent
velocity are sampled from closed-form profiles, and sigma is obtained by
an actual elliptic solve so that it is discretely consistent with the
evolution operator (the 1D closed form for sigma is reserved for
verification).  Profiles are evaluated at periodically wrapped offsets,
which makes the data exactly periodic instead of relying on tail decay
alone; a warning is raised when the tails at the seam are fat enough to
matter.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .dynamics import PhysicalParams, State
from .elliptic import GmresConfig, solve_sigma
from .errors import ConfigurationError, ParameterError
from .spectral import Grid

__all__ = [
    "SolitaryWaveParams",
    "solitary_wave_profile",
    "line_wave_2d",
    "gaussian_perturbed_wave",
    "crossing_waves",
    "gaussian_hump",
    "rest_state",
]

#: Seam-tail magnitude above which a generator warns that the domain is
#: too narrow for the requested profile.
SEAM_TAIL_WARN = 1e-10


@dataclass(frozen=True)
class SolitaryWaveParams:
    """Speed, initial crest position, and the mass-flux constant m = -c*h_inf."""

    c: float
    x0: float
    m: float

    @classmethod
    def create(cls, c: float, x0: float, params: PhysicalParams) -> "SolitaryWaveParams":
        if c * c <= params.g * params.h_inf:
            raise ParameterError(
                f"no solitary wave for c^2 <= g*h_inf (c={c}, g={params.g}, "
                f"h_inf={params.h_inf})"
            )
        return cls(c=float(c), x0=float(x0), m=-float(c) * params.h_inf)


def solitary_wave_profile(xi, c: float, g: float = 1.0, h_inf: float = 1.0):
    """Exact 1D solitary wave sampled at offsets xi = x - c*t.

    Returns (h, u, sigma, phi_x):

        h     = h_inf + A sech^2(kappa xi),  A = (c^2 - g h_inf)/g,
                kappa = sqrt(3 (c^2 - g h_inf)) / (2 c h_inf)
        u     = c + m/h,             m = -c h_inf  (from h (u - c) = m)
        sigma = m (h^2)'/6
        phi_x = c + (m/h) (1 + (h^2)''/6)

    with the xi-derivatives of h^2 evaluated in closed form.
    """
    if c * c <= g * h_inf:
        raise ParameterError(
            f"no solitary wave for c^2 <= g*h_inf (c={c}, g={g}, h_inf={h_inf})"
        )
    xi = np.asarray(xi, dtype=np.float64)
    amp = (c * c - g * h_inf) / g
    kappa = np.sqrt(3.0 * (c * c - g * h_inf)) / (2.0 * c * h_inf)
    sech = 1.0 / np.cosh(kappa * xi)
    tanh = np.tanh(kappa * xi)
    sech2 = sech * sech

    h = h_inf + amp * sech2
    m = -c * h_inf
    u = c + m / h

    # h' = -2 A kappa sech^2 tanh;  h'' = -2 A kappa^2 sech^2 (sech^2 - 2 tanh^2)
    hp = -2.0 * amp * kappa * sech2 * tanh
    hpp = -2.0 * amp * kappa * kappa * sech2 * (sech2 - 2.0 * tanh * tanh)
    sigma = m * (2.0 * h * hp) / 6.0
    h2pp = 2.0 * (hp * hp + h * hpp)
    phi_x = c + (m / h) * (1.0 + h2pp / 6.0)
    return h, u, sigma, phi_x


def _wrap(offset: np.ndarray, L: float) -> np.ndarray:
    """Map offsets into the fundamental period [-pi*L, pi*L)."""
    span = 2.0 * np.pi * L
    return (offset + 0.5 * span) % span - 0.5 * span


def _warn_seam(label: str, tail: float) -> None:
    if tail > SEAM_TAIL_WARN:
        warnings.warn(
            f"{label}: profile tail {tail:.2e} at the periodic seam exceeds "
            f"{SEAM_TAIL_WARN:.0e}; widen the domain or move x0",
            stacklevel=3,
        )


def _solved_state(grid, h, vx, vy, cfg):
    sigma, _ = solve_sigma(grid, h, vx, vy, cfg=cfg)
    return State(grid=grid, t=0.0, h=h, vx=vx, vy=vy, sigma=sigma)


def line_wave_2d(
    grid: Grid,
    c: float,
    x0: float = 0.0,
    eps: float = 0.0,
    ky_mode: int | None = None,
    params: PhysicalParams = PhysicalParams(),
    cfg: GmresConfig | None = None,
) -> State:
    """Line solitary wave, optionally with a sinusoidally deformed crest.

    The crest sits at x0 + eps*cos(y) (the printed deformation, one
    period per 2*pi in y; requires an integer Ly to stay periodic).
    Passing an integer `ky_mode` selects eps*cos(ky_mode * y / Ly)
    instead, i.e. exactly ky_mode periods across the domain width on any
    Ly.  eps = 0 is the unperturbed wave; vy = 0 either way.
    """
    wave = SolitaryWaveParams.create(c, x0, params)
    if ky_mode is None:
        if eps != 0.0 and abs(grid.Ly - round(grid.Ly)) > 1e-12:
            raise ConfigurationError(
                f"cos(y) deformation needs an integer Ly to be periodic "
                f"(got Ly={grid.Ly}); pass ky_mode to pin a mode count"
            )
        shift = eps * np.cos(grid.y)[None, :]
    else:
        shift = eps * np.cos(int(ky_mode) * grid.y / grid.Ly)[None, :]

    xi = _wrap(grid.x[:, None] - wave.x0 - shift, grid.Lx)
    h, _, _, phi_x = solitary_wave_profile(xi, c, params.g, params.h_inf)
    vx = phi_x
    vy = np.zeros(grid.shape)

    seam = float(np.abs(h[0, :] - params.h_inf).max())
    _warn_seam("line_wave_2d", seam)
    return _solved_state(grid, h, np.ascontiguousarray(vx), vy, cfg)


def gaussian_perturbed_wave(
    grid: Grid,
    c: float,
    x0: float = 0.0,
    sign: int = 1,
    amp: float = 0.1,
    params: PhysicalParams = PhysicalParams(),
    cfg: GmresConfig | None = None,
) -> State:
    """Line solitary wave with a localized Gaussian bump or dent.

    h = h_c(x - x0) +/- amp * exp(-(x - x0)^2 - y^2); the velocity is the
    unperturbed wave's, so the perturbation is in depth only.
    """
    if sign not in (1, -1):
        raise ParameterError(f"sign must be +1 or -1, got {sign}")
    wave = SolitaryWaveParams.create(c, x0, params)
    xi = _wrap(grid.x - wave.x0, grid.Lx)[:, None]
    h1d, _, _, phi_x = solitary_wave_profile(xi, c, params.g, params.h_inf)

    bump = np.exp(-(xi * xi) - (grid.y * grid.y)[None, :])
    h = h1d + float(sign) * amp * bump
    vx = np.ascontiguousarray(np.broadcast_to(phi_x, grid.shape))
    vy = np.zeros(grid.shape)

    seam = float(np.abs(h[0, :] - params.h_inf).max())
    _warn_seam("gaussian_perturbed_wave", seam)
    return _solved_state(grid, np.ascontiguousarray(h), vx, vy, cfg)


def crossing_waves(
    grid: Grid,
    c: float,
    params: PhysicalParams = PhysicalParams(),
    cfg: GmresConfig | None = None,
) -> State:
    """Superposition of a line wave along x and one along y, crests at 0.

    h = h_c(x) + h_c(y) - h_inf: the printed sum alone would put the
    background at 2*h_inf, so one copy of the far-field depth is removed
    to restore h -> h_inf away from both crests.  Each velocity component
    is the 1D phi' formula of its own wave, so the data are symmetric
    under the (x, y) swap.
    """
    SolitaryWaveParams.create(c, 0.0, params)
    xix = _wrap(grid.x, grid.Lx)
    xiy = _wrap(grid.y, grid.Ly)
    hx, _, _, phix = solitary_wave_profile(xix, c, params.g, params.h_inf)
    hy, _, _, phiy = solitary_wave_profile(xiy, c, params.g, params.h_inf)

    h = hx[:, None] + hy[None, :] - params.h_inf
    vx = np.ascontiguousarray(np.broadcast_to(phix[:, None], grid.shape))
    vy = np.ascontiguousarray(np.broadcast_to(phiy[None, :], grid.shape))

    seam = max(
        float(np.abs(hx[0] - params.h_inf)), float(np.abs(hy[0] - params.h_inf))
    )
    _warn_seam("crossing_waves", seam)
    return _solved_state(grid, np.ascontiguousarray(h), vx, vy, cfg)


def gaussian_hump(
    grid: Grid,
    alpha: float,
    params: PhysicalParams = PhysicalParams(),
    cfg: GmresConfig | None = None,
    literal: bool = False,
) -> State:
    """Gaussian depth hump at rest: v = 0 (hence sigma = 0 exactly).

    Default reading: h = h_inf + (alpha - h_inf) exp(-x^2 - y^2), which
    peaks at alpha and decays to the far-field depth.  `literal=True`
    instead samples alpha*exp(-x^2-y^2) as printed; that depth decays to
    zero, so the state violates the no-cavitation floor and only exists
    for inspection, not evolution.
    """
    if alpha <= 0.0:
        raise ParameterError(f"alpha must be positive, got {alpha}")
    X, Y = grid.mesh()
    bump = np.exp(-(X * X) - (Y * Y))
    if literal:
        h = alpha * bump
    else:
        h = params.h_inf + (alpha - params.h_inf) * bump
    vx = np.zeros(grid.shape)
    vy = np.zeros(grid.shape)
    if literal:
        # v = 0 forces sigma = 0; skip the solve, whose operator would
        # reject the (intentionally) near-zero depth.
        return State(grid=grid, t=0.0, h=np.ascontiguousarray(h),
                     vx=vx, vy=vy, sigma=np.zeros(grid.shape))
    return _solved_state(grid, np.ascontiguousarray(h), vx, vy, cfg)


def rest_state(
    grid: Grid,
    params: PhysicalParams = PhysicalParams(),
) -> State:
    """Flat lake at the far-field depth: the exact fixed point of the flow."""
    return State(
        grid=grid,
        t=0.0,
        h=np.full(grid.shape, params.h_inf),
        vx=np.zeros(grid.shape),
        vy=np.zeros(grid.shape),
        sigma=np.zeros(grid.shape),
    )
