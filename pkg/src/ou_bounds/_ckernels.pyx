# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the sequential recurrences in ``_pykernels``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def ar1_paths(z, decay, innov, double sd0):
    cdef double[:, ::1] zv = np.ascontiguousarray(z, dtype=np.float64)
    cdef const double[::1] a = np.ascontiguousarray(decay, dtype=np.float64)
    cdef const double[::1] s = np.ascontiguousarray(innov, dtype=np.float64)
    cdef Py_ssize_t trials = zv.shape[0], n = zv.shape[1]
    out = np.empty((trials, n), dtype=np.float64)
    cdef double[:, ::1] x = out
    cdef Py_ssize_t t, i
    cdef double prev
    with nogil:
        for t in range(trials):
            prev = sd0 * zv[t, 0]
            x[t, 0] = prev
            for i in range(n - 1):
                prev = a[i] * prev + s[i] * zv[t, i + 1]
                x[t, i + 1] = prev
    return out


def tridiag_inverse_band(d, e):
    cdef const double[::1] dv = np.ascontiguousarray(d, dtype=np.float64)
    cdef const double[::1] ev = np.ascontiguousarray(e, dtype=np.float64)
    cdef Py_ssize_t n = dv.shape[0], i
    fwd_a = np.empty(n, dtype=np.float64)
    bwd_a = np.empty(n, dtype=np.float64)
    diag_a = np.empty(n, dtype=np.float64)
    off_a = np.empty(max(n - 1, 0), dtype=np.float64)
    cdef double[::1] fwd = fwd_a, bwd = bwd_a, diag = diag_a, off = off_a
    with nogil:
        fwd[0] = dv[0]
        for i in range(1, n):
            fwd[i] = dv[i] - ev[i - 1] * ev[i - 1] / fwd[i - 1]
        bwd[n - 1] = dv[n - 1]
        for i in range(n - 2, -1, -1):
            bwd[i] = dv[i] - ev[i] * ev[i] / bwd[i + 1]
        for i in range(n):
            diag[i] = 1.0 / (fwd[i] + bwd[i] - dv[i])
        for i in range(n - 1):
            off[i] = -ev[i] * diag[i + 1] / fwd[i]
    return diag_a, off_a
