"""Periodic grid, DFT transforms, spectral derivatives, filtering, quadrature.

The computational domain is the torus [-pi*Lx, pi*Lx) x [-pi*Ly, pi*Ly),
discretized by Nx x Ny uniform collocation nodes.  A real field is a plain
C-contiguous float64 array of shape (Nx, Ny) with value[i, j] taken at
(x[i], y[j]); its spectral counterpart is the complex (Nx, Ny) array of
unnormalized DFT coefficients indexed by the signed wavenumbers
(kx[i], ky[j]) with k in units of 1/length (integer multiples of 1/L).

Hot paths elsewhere in the package use the half-spectrum rfft2 layout
(shape (Nx, Ny//2 + 1)); the broadcast-ready wavenumber tables for both
layouts are precomputed on the Grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

__all__ = [
    "Grid",
    "make_grid",
    "forward",
    "inverse",
    "derivative",
    "krasny_filter",
    "dealias_mask",
    "integrate",
]

#: Default relative Krasny threshold (coefficients below threshold * max
#: modulus are zeroed to stop rounding noise from piling up).
KRASNY_DEFAULT = 1e-12


@dataclass(frozen=True, eq=False)
class Grid:
    """Immutable 2D collocation grid with precomputed wavenumber tables.

    Compared by identity: two grids built from the same arguments hold
    equal tables but are distinct objects.
    """

    Nx: int
    Ny: int
    Lx: float
    Ly: float
    x: np.ndarray  # (Nx,) nodes, x[n] = -pi*Lx + 2*pi*Lx*n/Nx
    y: np.ndarray  # (Ny,)
    kx: np.ndarray  # (Nx,) signed wavenumbers {-Nx/2..Nx/2-1}/Lx
    ky: np.ndarray  # (Ny,)
    # rfft2 layout helpers (x on axis 0 full, y on axis 1 nonnegative):
    ikxh: np.ndarray = field(repr=False)  # (Nx, 1) i*kx, Nyquist zeroed
    ikyh: np.ndarray = field(repr=False)  # (1, Ny//2+1) i*ky, Nyquist zeroed
    kx2h: np.ndarray = field(repr=False)  # (Nx, 1) kx^2 (Nyquist kept)
    ky2h: np.ndarray = field(repr=False)  # (1, Ny//2+1) ky^2 (Nyquist kept)
    k2h: np.ndarray = field(repr=False)  # (Nx, Ny//2+1) kx^2 + ky^2
    weight: float = 0.0  # quadrature weight dx*dy

    @property
    def dx(self) -> float:
        return 2.0 * np.pi * self.Lx / self.Nx

    @property
    def dy(self) -> float:
        return 2.0 * np.pi * self.Ly / self.Ny

    @property
    def shape(self) -> tuple[int, int]:
        return (self.Nx, self.Ny)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Broadcastable nodal coordinates X (Nx,1), Y (1,Ny)."""
        return self.x[:, None], self.y[None, :]


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def make_grid(Nx: int, Ny: int, Lx: float, Ly: float) -> Grid:
    """Build the periodic collocation grid.

    Nx, Ny must be powers of two >= 8 (FFT efficiency); Lx, Ly > 0 set the
    periods 2*pi*Lx and 2*pi*Ly.
    """
    if not (_is_pow2(Nx) and Nx >= 8) or not (_is_pow2(Ny) and Ny >= 8):
        raise ConfigurationError(
            f"grid counts must be powers of two >= 8, got Nx={Nx}, Ny={Ny}"
        )
    if Lx <= 0 or Ly <= 0:
        raise ConfigurationError(f"periods must be positive, got Lx={Lx}, Ly={Ly}")

    x = -np.pi * Lx + 2.0 * np.pi * Lx * np.arange(Nx) / Nx
    y = -np.pi * Ly + 2.0 * np.pi * Ly * np.arange(Ny) / Ny
    # fftfreq with d = dx gives cycles per unit length = m/(2*pi*L); the
    # wavenumber paired with exp(i*k*x) is 2*pi*freq = m/L.
    kx = 2.0 * np.pi * np.fft.fftfreq(Nx, d=2.0 * np.pi * Lx / Nx)
    ky = 2.0 * np.pi * np.fft.fftfreq(Ny, d=2.0 * np.pi * Ly / Ny)

    nyh = Ny // 2 + 1
    kyhalf = ky[:nyh].copy()
    kyhalf[-1] = abs(ky[Ny // 2])  # rfft layout: last entry is +Nyquist

    ikx = 1j * kx
    ikx[Nx // 2] = 0.0  # odd-order derivatives drop the sign-ambiguous mode
    iky = 1j * kyhalf
    iky[-1] = 0.0

    kx2 = (kx**2)[:, None]
    ky2 = (kyhalf**2)[None, :]

    return Grid(
        Nx=Nx,
        Ny=Ny,
        Lx=float(Lx),
        Ly=float(Ly),
        x=x,
        y=y,
        kx=kx,
        ky=ky,
        ikxh=ikx[:, None],
        ikyh=iky[None, :],
        kx2h=kx2,
        ky2h=ky2,
        k2h=kx2 + ky2,
        weight=(2.0 * np.pi * Lx / Nx) * (2.0 * np.pi * Ly / Ny),
    )


def _check_field(grid: Grid, f: np.ndarray) -> None:
    if f.shape != grid.shape:
        raise ConfigurationError(f"field shape {f.shape} != grid shape {grid.shape}")
    if not np.all(np.isfinite(f)):
        raise ConfigurationError("field contains non-finite values")


def forward(grid: Grid, f: np.ndarray) -> np.ndarray:
    """Full-spectrum DFT of a real field (unnormalized forward transform).

    The output is Hermitian-symmetric, so `inverse` recovers a real field.
    """
    _check_field(grid, f)
    return np.fft.fft2(f)


def inverse(grid: Grid, fhat: np.ndarray) -> np.ndarray:
    """Inverse DFT (carries the 1/(Nx*Ny) normalization); returns the real part."""
    if fhat.shape != grid.shape:
        raise ConfigurationError(
            f"coefficient shape {fhat.shape} != grid shape {grid.shape}"
        )
    return np.fft.ifft2(fhat).real


def derivative(grid: Grid, f: np.ndarray, axis: str, order: int = 1) -> np.ndarray:
    """Spectral derivative d^order f / d(axis)^order, axis in {"x", "y"}.

    Coefficients are multiplied by (i*k)^order; for odd orders the Nyquist
    mode is zeroed (its sign is ambiguous), for even orders it is kept with
    the real multiplier (-k^2).
    """
    _check_field(grid, f)
    if order not in (1, 2):
        raise ConfigurationError(f"derivative order must be 1 or 2, got {order}")
    fh = np.fft.rfft2(f)
    if axis == "x":
        mult = grid.ikxh if order == 1 else -grid.kx2h
    elif axis == "y":
        mult = grid.ikyh if order == 1 else -grid.ky2h
    else:
        raise ConfigurationError(f"axis must be 'x' or 'y', got {axis!r}")
    return np.fft.irfft2(fh * mult, s=grid.shape)


def krasny_filter(fhat: np.ndarray, threshold: float = KRASNY_DEFAULT) -> np.ndarray:
    """Zero all coefficients with modulus below threshold * max modulus.

    Works on either the full or the half (rfft2) spectrum layout.  Idempotent;
    threshold 0 is the identity.
    """
    if threshold < 0:
        raise ConfigurationError(f"threshold must be >= 0, got {threshold}")
    mags = np.abs(fhat)
    cap = mags.max()
    if cap == 0.0 or threshold == 0.0:
        return fhat.copy()
    out = fhat.copy()
    out[mags < threshold * cap] = 0.0
    return out


def dealias_mask(grid: Grid) -> np.ndarray:
    """Boolean rfft2-layout mask of the modes a 2/3-rule dealias drops.

    Off by default everywhere in the package (the Krasny filter alone
    matches the reference setup); exposed for experiments with quadratic
    aliasing.
    """
    cutx = (2.0 / 3.0) * np.abs(grid.kx).max()
    cuty = (2.0 / 3.0) * np.abs(grid.ky).max()
    nyh = grid.Ny // 2 + 1
    kyhalf = np.abs(grid.ky[:nyh].copy())
    kyhalf[-1] = np.abs(grid.ky[grid.Ny // 2])
    return (np.abs(grid.kx)[:, None] > cutx) | (kyhalf[None, :] > cuty)


def integrate(grid: Grid, f: np.ndarray) -> float:
    """Spectral (trapezoid) quadrature: dx*dy * sum(f).

    Exact for band-limited periodic integrands; equals (2*pi*Lx)(2*pi*Ly)
    times the normalized mean mode.
    """
    _check_field(grid, f)
    return float(grid.weight * np.sum(f))
