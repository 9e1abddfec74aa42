"""Pure-numpy implementations of the hot pointwise kernels.

Signature-compatible with the compiled `sgn2d._speedups` extension; the
compiled versions fuse the loops to avoid intermediate arrays, these rely
on numpy temporaries.  All arrays are C-contiguous float64 of one shape.
Output buffers must not alias inputs unless a kernel says otherwise.
"""

import numpy as np

COMPILED = False


def sigma_combine(sigma, h, div_term, out):
    """out = 3*sigma/h^3 - div_term (the nodal part of the sigma operator)."""
    np.divide(sigma, h * h * h, out=out)
    out *= 3.0
    out -= div_term
    return out


def scale_pair(ax, ay, inv_h, outx, outy):
    """outx = ax*inv_h, outy = ay*inv_h (gradient scaled by 1/h).

    In-place use (outx is ax, outy is ay) is allowed.
    """
    np.multiply(ax, inv_h, out=outx)
    np.multiply(ay, inv_h, out=outy)
    return outx, outy


def bernoulli_head(vx, vy, sx, sy, sigma, h, g, out):
    """out = (vx^2+vy^2)/2 - (sx^2+sy^2)/(2h^2) + g*h - 4.5*sigma^2/h^4."""
    h2 = h * h
    np.multiply(vx, vx, out=out)
    out += vy * vy
    out -= (sx * sx + sy * sy) / h2
    out *= 0.5
    out += g * h
    out -= 4.5 * (sigma * sigma) / (h2 * h2)
    return out


def rk4_combine(y0, k1, k2, k3, k4, dt, out):
    """out = y0 + dt/6 * (k1 + 2*k2 + 2*k3 + k4)."""
    np.add(k2, k3, out=out)
    out *= 2.0
    out += k1
    out += k4
    out *= dt / 6.0
    out += y0
    return out


def krasny_zero(chat, rel_threshold):
    """Zero coefficients with |chat| < rel_threshold * max|chat|, in place.

    Returns the max modulus (0.0 leaves the array untouched).
    """
    mags = np.abs(chat)
    cap = float(mags.max())
    if cap > 0.0 and rel_threshold > 0.0:
        chat[mags < rel_threshold * cap] = 0.0
    return cap
