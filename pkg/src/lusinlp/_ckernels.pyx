# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled versions of the kernels in _pykernels."""

from libc.math cimport fabs, pow, sqrt

import numpy as np


def pair_modulus(ts, vals, weights, deltas):
    cdef double[::1] t = np.ascontiguousarray(ts, dtype=float)
    cdef double[:, ::1] x = np.ascontiguousarray(vals, dtype=float)
    cdef double[::1] w = np.ascontiguousarray(weights, dtype=float)
    cdef double[::1] d = np.ascontiguousarray(deltas, dtype=float)
    cdef Py_ssize_t n = t.shape[0], m = x.shape[1], nb = d.shape[0]
    out_arr = np.zeros(nb)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, k, j, b
    cdef double dist, g, dmax = 0.0
    for b in range(nb):
        if d[b] > dmax:
            dmax = d[b]
    for i in range(n):
        for k in range(i + 1, n):
            dist = t[k] - t[i]
            if dist > dmax:
                break
            g = 0.0
            for j in range(m):
                g += w[j] * fabs(x[i, j] - x[k, j])
            for b in range(nb):
                if dist <= d[b] and g > out[b]:
                    out[b] = g
    return out_arr


def pairwise_sup(stack, weights):
    cdef double[:, :, ::1] s = np.ascontiguousarray(stack, dtype=float)
    cdef double[::1] w = np.ascontiguousarray(weights, dtype=float)
    cdef Py_ssize_t M = s.shape[0], R = s.shape[1], J = s.shape[2]
    out_arr = np.zeros((M, M))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t a, c, r, j
    cdef double g, best
    for a in range(M):
        for c in range(a + 1, M):
            best = 0.0
            for r in range(R):
                g = 0.0
                for j in range(J):
                    g += w[j] * fabs(s[a, r, j] - s[c, r, j])
                if g > best:
                    best = g
            out[a, c] = best
            out[c, a] = best
    return out_arr


cdef double _one(double u, double v, double a, double b, double p):
    cdef double gu, gv, gmax, r, half, mid, x0
    if b == 0.0:
        return pow(fabs(a), p) * (v - u)
    gu = fabs(a + b * u)
    gv = fabs(a + b * v)
    gmax = gu if gu > gv else gv
    r = -a / b
    if r > u and r < v:
        return (pow(gu, p + 1) + pow(gv, p + 1)) / (fabs(b) * (p + 1))
    if fabs(b) * (v - u) <= 1e-6 * gmax:
        mid = 0.5 * (u + v)
        half = 0.5 * (v - u)
        x0 = sqrt(0.6) * half
        return half * (5.0 * pow(fabs(a + b * (mid - x0)), p)
                       + 8.0 * pow(fabs(a + b * mid), p)
                       + 5.0 * pow(fabs(a + b * (mid + x0)), p)) / 9.0
    return fabs(pow(gv, p + 1) - pow(gu, p + 1)) / (fabs(b) * (p + 1))


def affine_power_integral(u, v, a, b, double p):
    cdef double[::1] uu = np.ascontiguousarray(u, dtype=float).ravel()
    cdef double[::1] vv = np.ascontiguousarray(v, dtype=float).ravel()
    cdef double[::1] aa = np.ascontiguousarray(a, dtype=float).ravel()
    cdef double[::1] bb = np.ascontiguousarray(b, dtype=float).ravel()
    cdef Py_ssize_t n = uu.shape[0], i
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    for i in range(n):
        out[i] = _one(uu[i], vv[i], aa[i], bb[i], p)
    return out_arr
