# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled kernels for the aggregation and residual hot loops.

Bit-for-bit mirror of `_pure`; see the note there before changing either.
Built with -O2 (no fast-math) so IEEE evaluation order is preserved.
"""

from libc.math cimport exp, log

import numpy as np

BACKEND_NAME = "compiled"


cdef inline double _geo_row(const double[:, ::1] w, const double[::1] p, Py_ssize_t i) noexcept nogil:
    cdef Py_ssize_t q
    cdef double acc = 0.0
    for q in range(w.shape[1]):
        acc += p[q] * log(w[i, q])
    return acc


cdef inline double _ari_row(const double[:, ::1] w, const double[::1] p, Py_ssize_t i) noexcept nogil:
    cdef Py_ssize_t q
    cdef double acc = 0.0
    for q in range(w.shape[1]):
        acc += w[i, q] * p[q]
    return acc


def weighted_geometric(const double[:, ::1] w, const double[::1] p):
    """out[i] = prod_q w[i, q] ** p[q], computed in the log domain."""
    cdef Py_ssize_t n = w.shape[0]
    out = np.empty(n)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(n):
        ov[i] = exp(_geo_row(w, p, i))
    return out


def weighted_arithmetic(const double[:, ::1] w, const double[::1] p):
    """out[i] = sum_q w[i, q] * p[q]."""
    cdef Py_ssize_t n = w.shape[0]
    out = np.empty(n)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(n):
        ov[i] = _ari_row(w, p, i)
    return out


cdef double _residual_geometric(const double[:, ::1] w, const double[::1] y, double[::1] p) noexcept nogil:
    cdef Py_ssize_t n = w.shape[0]
    cdef Py_ssize_t i, q
    cdef double s = 0.0, total = 0.0, d
    for q in range(n):
        s += y[q]
    for q in range(n):
        p[q] = y[q] / s
    for i in range(n):
        d = exp(_geo_row(w, p, i)) - y[i]
        total += d * d
    return total


cdef double _residual_arithmetic(const double[:, ::1] w, const double[::1] y, double[::1] p) noexcept nogil:
    cdef Py_ssize_t n = w.shape[0]
    cdef Py_ssize_t i, q
    cdef double s = 0.0, total = 0.0, d
    for q in range(n):
        s += y[q]
    for q in range(n):
        p[q] = y[q] / s
    for i in range(n):
        d = _ari_row(w, p, i) - y[i]
        total += d * d
    return total


def residual_geometric(const double[:, ::1] w, const double[::1] y):
    """Sum of squared gaps between weighted geometric means and y."""
    cdef double[::1] p = np.empty(w.shape[0])
    return _residual_geometric(w, y, p)


def residual_arithmetic(const double[:, ::1] w, const double[::1] y):
    """Sum of squared gaps between weighted arithmetic means and y."""
    cdef double[::1] p = np.empty(w.shape[0])
    return _residual_arithmetic(w, y, p)


def objective_geometric(const double[:, ::1] w, const double[::1] z):
    """residual_geometric evaluated at y = exp(z), componentwise."""
    cdef Py_ssize_t n = w.shape[0]
    cdef double[::1] y = np.empty(n)
    cdef double[::1] p = np.empty(n)
    cdef Py_ssize_t q
    for q in range(n):
        y[q] = exp(z[q])
    return _residual_geometric(w, y, p)


def objective_arithmetic(const double[:, ::1] w, const double[::1] z):
    """residual_arithmetic evaluated at y = exp(z), componentwise."""
    cdef Py_ssize_t n = w.shape[0]
    cdef double[::1] y = np.empty(n)
    cdef double[::1] p = np.empty(n)
    cdef Py_ssize_t q
    for q in range(n):
        y[q] = exp(z[q])
    return _residual_arithmetic(w, y, p)
