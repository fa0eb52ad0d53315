# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``pure.py``.

Expressions mirror the NumPy backend exactly (same operations, same
order, and for the splat the same two-pass accumulation order) so both
backends produce bit-identical results.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, floor

cnp.import_array()


def splat_events(double[::1] t, long[::1] x, long[::1] y, double[::1] p,
                 double t0, double t1, int bins, int height, int width):
    cdef Py_ssize_t n = t.shape[0]
    cdef cnp.ndarray[double, ndim=3] grid = np.zeros((bins, height, width), dtype=np.float64)
    cdef double[:, :, ::1] g = grid
    cdef Py_ssize_t i
    cdef double tau, frac
    cdef long b0

    if n == 0:
        return grid
    if bins == 1:
        for i in range(n):
            g[0, y[i], x[i]] += p[i]
        return grid
    # left pass then right pass, matching np.add.at accumulation order
    for i in range(n):
        tau = (t[i] - t0) / (t1 - t0) * (bins - 1)
        b0 = <long>floor(tau)
        frac = tau - floor(tau)
        g[b0, y[i], x[i]] += p[i] * (1.0 - frac)
    for i in range(n):
        tau = (t[i] - t0) / (t1 - t0) * (bins - 1)
        b0 = <long>floor(tau)
        frac = tau - floor(tau)
        if b0 + 1 < bins:
            g[b0 + 1, y[i], x[i]] += p[i] * frac
    return grid


def simulate_crossings(double[:, :, ::1] logl, double[::1] times,
                       double[:, ::1] thresholds):
    cdef Py_ssize_t n_seg = times.shape[0] - 1
    cdef Py_ssize_t h = thresholds.shape[0]
    cdef Py_ssize_t w = thresholds.shape[1]
    cdef cnp.ndarray[double, ndim=2] ref_arr = np.array(logl[0], dtype=np.float64, copy=True)
    cdef double[:, ::1] ref = ref_arr
    cdef Py_ssize_t iy, ix, j
    cdef long total, k, i
    cdef double l0v, l1v, d, pol, nv, cv, lev

    # pass 1: count
    total = 0
    for iy in range(h):
        for ix in range(w):
            cv = thresholds[iy, ix]
            for j in range(n_seg):
                d = logl[j + 1, iy, ix] - ref[iy, ix]
                pol = 0.0
                if d > 0.0:
                    pol = 1.0
                elif d < 0.0:
                    pol = -1.0
                nv = floor(fabs(d) / cv)
                total += <long>nv
                ref[iy, ix] = ref[iy, ix] + pol * nv * cv

    cdef cnp.ndarray[double, ndim=1] out_t = np.empty(total, dtype=np.float64)
    cdef cnp.ndarray[long, ndim=1] out_x = np.empty(total, dtype=np.int64)
    cdef cnp.ndarray[long, ndim=1] out_y = np.empty(total, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] out_p = np.empty(total, dtype=np.float64)
    cdef double[::1] ot = out_t
    cdef long[::1] ox = out_x
    cdef long[::1] oy = out_y
    cdef double[::1] op = out_p

    # pass 2: emit
    for iy in range(h):
        for ix in range(w):
            ref[iy, ix] = logl[0, iy, ix]
    k = 0
    for iy in range(h):
        for ix in range(w):
            cv = thresholds[iy, ix]
            for j in range(n_seg):
                l0v = logl[j, iy, ix]
                l1v = logl[j + 1, iy, ix]
                d = l1v - ref[iy, ix]
                pol = 0.0
                if d > 0.0:
                    pol = 1.0
                elif d < 0.0:
                    pol = -1.0
                nv = floor(fabs(d) / cv)
                for i in range(1, <long>nv + 1):
                    lev = ref[iy, ix] + i * cv * pol
                    ot[k] = times[j] + (lev - l0v) / (l1v - l0v) * (times[j + 1] - times[j])
                    ox[k] = ix
                    oy[k] = iy
                    op[k] = pol
                    k += 1
                ref[iy, ix] = ref[iy, ix] + pol * nv * cv
    return out_t, out_x, out_y, out_p
