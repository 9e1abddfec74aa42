"""Sigma solves: matrix-free operator application and preconditioned GMRES.

Every right-hand-side evaluation of the flow needs the auxiliary field
sigma from

    3*sigma/h^3 - div(grad(sigma)/h) = -div(v),

an elliptic problem whose coefficients are frozen at the current depth.
The operator is symmetric positive definite and is applied through FFTs;
it is inverted with restarted GMRES, left-preconditioned by the
constant-depth operator, which is diagonal in Fourier space.  Warm
starting from the previous stage's sigma keeps the iteration counts low.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import CavitationError, ConfigurationError, GmresError
from .spectral import Grid, derivative

__all__ = [
    "GmresConfig",
    "GmresStats",
    "SigmaOperator",
    "apply_sigma_operator",
    "precondition",
    "gmres",
    "solve_sigma",
]


@dataclass(frozen=True)
class GmresConfig:
    """Tolerance and workspace bounds for the sigma solves.

    The default tolerance sits two orders below the energy-conservation
    level the time stepper is expected to reach, so the inner solves
    never dominate the error budget.  The restart dimension bounds the
    Krylov workspace at restart+1 field copies.
    """

    tol: float = 1e-12
    restart: int = 40
    maxiter: int = 400

    def __post_init__(self) -> None:
        if not 0.0 < self.tol < 1.0:
            raise ConfigurationError(f"tolerance must lie in (0, 1), got {self.tol}")
        if self.restart < 1:
            raise ConfigurationError(f"restart must be >= 1, got {self.restart}")
        if self.maxiter < 1:
            raise ConfigurationError(f"maxiter must be >= 1, got {self.maxiter}")


@dataclass(frozen=True)
class GmresStats:
    """Outcome of one linear solve.

    `iterations` counts Arnoldi steps (one operator application each).
    `residual` is the measured preconditioned relative residual of the
    returned iterate, recomputed from scratch, not the running Givens
    estimate.
    """

    iterations: int
    residual: float
    converged: bool


class SigmaOperator:
    """The map  sigma -> 3*sigma/h^3 - div(grad(sigma)/h)  at fixed depth.

    Construction validates the depth (positive, finite, grid-shaped).
    Applications are matrix-free: two spectral differentiations around a
    pointwise division by h.  The preconditioner uses the symbol of the
    same operator at h = 1 with identical Nyquist conventions, so at
    constant unit depth the preconditioned operator is the identity.
    """

    def __init__(self, grid: Grid, h: np.ndarray):
        h = np.ascontiguousarray(h, dtype=np.float64)
        if h.shape != grid.shape:
            raise ConfigurationError(
                f"depth shape {h.shape} does not match grid shape {grid.shape}"
            )
        if not np.all(np.isfinite(h)):
            raise ConfigurationError("depth field contains non-finite values")
        hmin = float(h.min())
        if hmin <= 0.0:
            raise CavitationError(
                f"sigma operator needs positive depth, got min(h) = {hmin:.3e}"
            )
        self.grid = grid
        self.h = h
        self._inv_h = 1.0 / h
        self._symbol = 3.0 + grid.ikxh.imag**2 + grid.ikyh.imag**2

    def apply(self, sigma: np.ndarray) -> np.ndarray:
        """Return the operator applied to sigma (all derivatives spectral)."""
        grid = self.grid
        sigma = np.ascontiguousarray(sigma, dtype=np.float64)
        shat = np.fft.rfft2(sigma)
        sx = np.fft.irfft2(shat * grid.ikxh, s=grid.shape)
        sy = np.fft.irfft2(shat * grid.ikyh, s=grid.shape)
        kernels.scale_pair(sx, sy, self._inv_h, sx, sy)
        fhat = np.fft.rfft2(sx)
        fhat *= grid.ikxh
        ghat = np.fft.rfft2(sy)
        ghat *= grid.ikyh
        fhat += ghat
        div = np.fft.irfft2(fhat, s=grid.shape)
        return kernels.sigma_combine(sigma, self.h, div, np.empty(grid.shape))

    def precondition(self, field: np.ndarray) -> np.ndarray:
        """Divide the field's DFT coefficients by the h=1 symbol."""
        fhat = np.fft.rfft2(field)
        fhat /= self._symbol
        return np.fft.irfft2(fhat, s=self.grid.shape)

    def apply_preconditioned(self, sigma: np.ndarray) -> np.ndarray:
        return self.precondition(self.apply(sigma))


def apply_sigma_operator(op: SigmaOperator, sigma: np.ndarray) -> np.ndarray:
    """Functional alias for SigmaOperator.apply."""
    return op.apply(sigma)


def precondition(grid: Grid, field: np.ndarray) -> np.ndarray:
    """Apply the inverse of the constant-depth operator (symbol 3 + |k|^2).

    The squared-wavenumber tables follow the first-derivative Nyquist
    convention so that this is the exact inverse of the sigma operator at
    h = 1; the denominator never drops below 3.
    """
    fhat = np.fft.rfft2(field)
    fhat /= 3.0 + grid.ikxh.imag**2 + grid.ikyh.imag**2
    return np.fft.irfft2(fhat, s=grid.shape)


def gmres(
    matvec,
    b: np.ndarray,
    x0: np.ndarray | None = None,
    *,
    tol: float = 1e-12,
    restart: int = 40,
    maxiter: int = 400,
) -> tuple[np.ndarray, GmresStats]:
    """Restarted GMRES on flat real vectors.

    `matvec` must be a linear map on 1D float64 arrays; preconditioning
    is folded into `matvec` and `b` by the caller.  Arnoldi uses
    classical Gram-Schmidt with one reorthogonalization pass, the least
    squares problem is updated with Givens rotations, and convergence is
    declared only on a residual measured from the assembled iterate, so
    the returned stats honor the residual contract.
    """
    b = np.asarray(b, dtype=np.float64).ravel()
    n = b.size
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        return np.zeros(n), GmresStats(0, 0.0, True)
    if x0 is None:
        x = np.zeros(n)
    else:
        x = np.asarray(x0, dtype=np.float64).ravel().copy()
        if x.size != n:
            raise ConfigurationError(f"guess size {x.size} != rhs size {n}")

    V = np.empty((restart + 1, n))
    H = np.zeros((restart + 1, restart))
    cs = np.empty(restart)
    sn = np.empty(restart)
    g = np.empty(restart + 1)
    iterations = 0

    while True:
        r = b - matvec(x)
        residual = float(np.linalg.norm(r)) / bnorm
        if residual <= tol:
            return x, GmresStats(iterations, residual, True)
        if iterations >= maxiter:
            return x, GmresStats(iterations, residual, False)

        beta = residual * bnorm
        V[0] = r / beta
        g[:] = 0.0
        g[0] = beta
        width = 0
        for j in range(restart):
            if iterations >= maxiter:
                break
            w = matvec(V[j])
            iterations += 1
            basis = V[: j + 1]
            coeffs = basis @ w
            w = w - coeffs @ basis
            refresh = basis @ w
            w -= refresh @ basis
            coeffs += refresh
            hnext = float(np.linalg.norm(w))
            H[: j + 1, j] = coeffs
            for i in range(j):
                hi, hk = H[i, j], H[i + 1, j]
                H[i, j] = cs[i] * hi + sn[i] * hk
                H[i + 1, j] = -sn[i] * hi + cs[i] * hk
            denom = float(np.hypot(H[j, j], hnext))
            if denom == 0.0:
                raise GmresError(
                    "operator produced a zero Krylov direction (singular map?)",
                    GmresStats(iterations, residual, False),
                )
            cs[j] = H[j, j] / denom
            sn[j] = hnext / denom
            H[j, j] = denom
            gj = g[j]
            g[j] = cs[j] * gj
            g[j + 1] = -sn[j] * gj
            width = j + 1
            # Givens estimate only gates the inner loop; the while-loop
            # header re-measures before declaring convergence.
            if hnext == 0.0 or abs(g[j + 1]) <= tol * bnorm:
                break
            V[j + 1] = w / hnext

        y = np.linalg.solve(np.triu(H[:width, :width]), g[:width])
        x = x + y @ V[:width]


def solve_sigma(
    grid: Grid,
    h: np.ndarray,
    vx: np.ndarray,
    vy: np.ndarray,
    guess: np.ndarray | None = None,
    cfg: GmresConfig | None = None,
) -> tuple[np.ndarray, GmresStats]:
    """Solve the sigma equation for the given depth and velocity.

    The right-hand side is -div(v).  `guess` (typically the previous
    stage's sigma) warm-starts the iteration; None starts from zero.
    Returns (sigma, stats); raises GmresError carrying the stats when the
    configured tolerance is not reached within cfg.maxiter iterations.
    """
    if cfg is None:
        cfg = GmresConfig()
    op = SigmaOperator(grid, h)
    rhs = -(derivative(grid, vx, "x") + derivative(grid, vy, "y"))
    return solve_with_operator(op, rhs, guess=guess, cfg=cfg)


def solve_with_operator(
    op: SigmaOperator,
    rhs: np.ndarray,
    guess: np.ndarray | None = None,
    cfg: GmresConfig | None = None,
) -> tuple[np.ndarray, GmresStats]:
    """Like solve_sigma, for callers that already hold the operator and rhs."""
    if cfg is None:
        cfg = GmresConfig()
    grid = op.grid

    def matvec(xflat: np.ndarray) -> np.ndarray:
        return op.apply_preconditioned(xflat.reshape(grid.shape)).ravel()

    b = op.precondition(rhs).ravel()
    x0 = None if guess is None else np.ascontiguousarray(guess, dtype=np.float64).ravel()
    x, stats = gmres(
        matvec, b, x0, tol=cfg.tol, restart=cfg.restart, maxiter=cfg.maxiter
    )
    if not stats.converged:
        raise GmresError(
            f"sigma solve stalled at relative residual {stats.residual:.3e} "
            f"after {stats.iterations} iterations (tol {cfg.tol:.1e})",
            stats,
        )
    return np.ascontiguousarray(x.reshape(grid.shape)), stats
