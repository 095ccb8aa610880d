# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled version of the per-edge distance-envelope kernels.

Mirrors ``envelope_py`` exactly; see that module for the contract.  The
compiled path avoids the O(n^2) broadcast temporaries of the numpy
implementation, which matters because the Voronoi relation is recomputed
for every proposal of the birth-death sampler and for every randomized
audit instance.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, fabs, isfinite

cnp.import_array()


def edge_candidates(av, bv, sv, double ell):
    cdef double[::1] a = np.ascontiguousarray(av, dtype=np.float64)
    cdef double[::1] b = np.ascontiguousarray(bv, dtype=np.float64)
    cdef double[::1] s = np.ascontiguousarray(sv, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t n_on = 0
    cdef Py_ssize_t i, j, k
    for i in range(n):
        if isfinite(s[i]):
            n_on += 1
    cdef Py_ssize_t npos = n + n_on
    cdef Py_ssize_t nneg = n + n_on
    pos_arr = np.empty(npos, dtype=np.float64)
    neg_arr = np.empty(nneg, dtype=np.float64)
    cdef double[::1] pos = pos_arr
    cdef double[::1] neg = neg_arr
    for i in range(n):
        pos[i] = a[i]
        neg[i] = b[i] + ell
    j = n
    for i in range(n):
        if isfinite(s[i]):
            pos[j] = -s[i]
            neg[j] = s[i]
            j += 1
    out_arr = np.empty(2 + n_on + npos * nneg, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t m = 0
    out[m] = 0.0
    m += 1
    out[m] = ell
    m += 1
    for i in range(n):
        if isfinite(s[i]):
            out[m] = s[i]
            m += 1
    cdef double t
    for i in range(npos):
        for k in range(nneg):
            t = (neg[k] - pos[i]) / 2.0
            if 0.0 <= t <= ell:
                out[m] = t
                m += 1
    return np.unique(out_arr[:m])


def profile_values(av, bv, sv, double ell, ts):
    cdef double[::1] a = np.ascontiguousarray(av, dtype=np.float64)
    cdef double[::1] b = np.ascontiguousarray(bv, dtype=np.float64)
    cdef double[::1] s = np.ascontiguousarray(sv, dtype=np.float64)
    cdef double[::1] t = np.ascontiguousarray(ts, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = t.shape[0]
    f_arr = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] f = f_arr
    cdef Py_ssize_t i, k
    cdef double val, alt
    for i in range(n):
        for k in range(m):
            val = a[i] + t[k]
            alt = b[i] + ell - t[k]
            if alt < val:
                val = alt
            if isfinite(s[i]):
                alt = fabs(t[k] - s[i])
                if alt < val:
                    val = alt
            f[i, k] = val
    return f_arr


def edge_comin_matrix(av, bv, sv, double ell, double eps):
    cdef Py_ssize_t n = len(av)
    out_arr = np.zeros((n, n), dtype=np.uint8)
    if n == 0:
        return out_arr.astype(bool)
    ts = edge_candidates(av, bv, sv, ell)
    f_arr = profile_values(av, bv, sv, ell, ts)
    cdef double[:, ::1] f = f_arr
    cdef cnp.uint8_t[:, ::1] out = out_arr
    cdef Py_ssize_t m = f.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double lo
    for k in range(m):
        lo = INFINITY
        for i in range(n):
            if f[i, k] < lo:
                lo = f[i, k]
        lo += eps
        for i in range(n):
            if f[i, k] <= lo:
                for j in range(n):
                    if f[j, k] <= lo:
                        out[i, j] = 1
    return out_arr.astype(bool)
