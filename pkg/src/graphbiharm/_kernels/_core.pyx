# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled CSR kernels for the graph operators.

Accumulation runs in ascending (vertex, neighbor) order so results are
bit-reproducible run to run.
"""

import numpy as np


cdef void _lap(const Py_ssize_t[::1] indptr, const Py_ssize_t[::1] indices,
               const double[::1] weights, const double[::1] mu,
               const double[::1] u, double[::1] out) noexcept nogil:
    cdef Py_ssize_t x, e
    cdef double s, ux
    for x in range(mu.shape[0]):
        s = 0.0
        ux = u[x]
        for e in range(indptr[x], indptr[x + 1]):
            s = s + weights[e] * (u[indices[e]] - ux)
        out[x] = s / mu[x]


cdef void _gamma(const Py_ssize_t[::1] indptr, const Py_ssize_t[::1] indices,
                 const double[::1] weights, const double[::1] mu,
                 const double[::1] u, const double[::1] v,
                 double[::1] out) noexcept nogil:
    cdef Py_ssize_t x, e, y
    cdef double s, ux, vx
    for x in range(mu.shape[0]):
        s = 0.0
        ux = u[x]
        vx = v[x]
        for e in range(indptr[x], indptr[x + 1]):
            y = indices[e]
            # difference product first: bit-symmetric in (u, v)
            s = s + weights[e] * ((u[y] - ux) * (v[y] - vx))
        out[x] = s / (2.0 * mu[x])


def laplacian(indptr, indices, weights, row, mu, u, out=None):
    if out is None:
        out = np.empty(mu.shape[0], dtype=np.float64)
    _lap(indptr, indices, weights, mu, u, out)
    return out


def gradient_form(indptr, indices, weights, row, mu, u, v, out=None):
    if out is None:
        out = np.empty(mu.shape[0], dtype=np.float64)
    _gamma(indptr, indices, weights, mu, u, v, out)
    return out
