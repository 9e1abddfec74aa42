# cython: boundscheck=False, wraparound=False, cdivision=True
"""Fused single-pass versions of the pointwise kernels in _fallback.py.

These sit inside the GMRES operator application and the RK4 update, the
two hottest non-FFT code paths, and exist purely to cut memory traffic.
"""

import numpy as np

cimport numpy as cnp

COMPILED = True


def sigma_combine(double[:, ::1] sigma, double[:, ::1] h,
                  double[:, ::1] div_term, double[:, ::1] out):
    cdef Py_ssize_t i, j, n = sigma.shape[0], m = sigma.shape[1]
    cdef double hv
    for i in range(n):
        for j in range(m):
            hv = h[i, j]
            out[i, j] = 3.0 * sigma[i, j] / (hv * hv * hv) - div_term[i, j]
    return np.asarray(out)


def scale_pair(double[:, ::1] ax, double[:, ::1] ay, double[:, ::1] inv_h,
               double[:, ::1] outx, double[:, ::1] outy):
    cdef Py_ssize_t i, j, n = ax.shape[0], m = ax.shape[1]
    cdef double w
    for i in range(n):
        for j in range(m):
            w = inv_h[i, j]
            outx[i, j] = ax[i, j] * w
            outy[i, j] = ay[i, j] * w
    return np.asarray(outx), np.asarray(outy)


def bernoulli_head(double[:, ::1] vx, double[:, ::1] vy,
                   double[:, ::1] sx, double[:, ::1] sy,
                   double[:, ::1] sigma, double[:, ::1] h,
                   double g, double[:, ::1] out):
    cdef Py_ssize_t i, j, n = vx.shape[0], m = vx.shape[1]
    cdef double hv, h2, s
    for i in range(n):
        for j in range(m):
            hv = h[i, j]
            h2 = hv * hv
            s = sigma[i, j]
            out[i, j] = (0.5 * (vx[i, j] * vx[i, j] + vy[i, j] * vy[i, j])
                         - 0.5 * (sx[i, j] * sx[i, j] + sy[i, j] * sy[i, j]) / h2
                         + g * hv
                         - 4.5 * s * s / (h2 * h2))
    return np.asarray(out)


def rk4_combine(double[:, ::1] y0, double[:, ::1] k1, double[:, ::1] k2,
                double[:, ::1] k3, double[:, ::1] k4, double dt,
                double[:, ::1] out):
    cdef Py_ssize_t i, j, n = y0.shape[0], m = y0.shape[1]
    cdef double w = dt / 6.0
    for i in range(n):
        for j in range(m):
            out[i, j] = y0[i, j] + w * (k1[i, j] + 2.0 * (k2[i, j] + k3[i, j])
                                        + k4[i, j])
    return np.asarray(out)


def krasny_zero(double complex[:, ::1] chat, double rel_threshold):
    cdef Py_ssize_t i, j, n = chat.shape[0], m = chat.shape[1]
    cdef double cap = 0.0, mag2, thr2
    cdef double complex c
    for i in range(n):
        for j in range(m):
            c = chat[i, j]
            mag2 = c.real * c.real + c.imag * c.imag
            if mag2 > cap:
                cap = mag2
    if cap == 0.0 or rel_threshold <= 0.0:
        return cap ** 0.5
    thr2 = rel_threshold * rel_threshold * cap
    for i in range(n):
        for j in range(m):
            c = chat[i, j]
            mag2 = c.real * c.real + c.imag * c.imag
            if mag2 < thr2:
                chat[i, j] = 0.0
    return cap ** 0.5
