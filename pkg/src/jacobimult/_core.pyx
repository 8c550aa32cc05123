# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.

Every function here has a numpy twin in :mod:`jacobimult._pycore` with the
same signature; :mod:`jacobimult._backend` picks one at import time.
"""

import numpy as np
from libc.math cimport sqrt, lgamma, exp, log, pow, INFINITY

cdef inline void _coeffs(double alpha, double beta, Py_ssize_t n,
                         double *a_n, double *b_n) noexcept nogil:
    # x p_n = a_{n+1} p_{n+1} + b_n p_n + a_n p_{n-1}; returns a_n and b_n
    cdef double s = alpha + beta
    cdef double t
    if n == 0:
        b_n[0] = (beta - alpha) / (s + 2.0)
        a_n[0] = 0.0
        return
    t = 2.0 * n + s
    b_n[0] = (beta * beta - alpha * alpha) / (t * (t + 2.0))
    if n == 1:
        a_n[0] = sqrt(4.0 * (alpha + 1.0) * (beta + 1.0)
                      / ((s + 2.0) * (s + 2.0) * (s + 3.0)))
    else:
        a_n[0] = 2.0 / t * sqrt(n * (n + alpha) * (n + beta) * (n + s)
                                / ((t - 1.0) * (t + 1.0)))


cdef inline double _p0(double alpha, double beta) noexcept nogil:
    return exp(0.5 * (lgamma(alpha + beta + 2.0) - (alpha + beta + 1.0) * log(2.0)
                      - lgamma(alpha + 1.0) - lgamma(beta + 1.0)))


def orthonormal_table(double alpha, double beta, Py_ssize_t nmax, x):
    """Rows p_0..p_nmax of the orthonormal family at the points ``x``."""
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t k = xv.shape[0]
    out = np.empty((nmax + 1, k), dtype=np.float64)
    cdef double[:, ::1] P = out
    cdef Py_ssize_t n, j
    cdef double a_n, b_n, a_next, b_dummy, p0 = _p0(alpha, beta)
    with nogil:
        for j in range(k):
            P[0, j] = p0
        if nmax >= 1:
            _coeffs(alpha, beta, 0, &a_n, &b_n)
            _coeffs(alpha, beta, 1, &a_next, &b_dummy)
            for j in range(k):
                P[1, j] = (xv[j] - b_n) * p0 / a_next
        for n in range(1, nmax):
            _coeffs(alpha, beta, n, &a_n, &b_n)
            _coeffs(alpha, beta, n + 1, &a_next, &b_dummy)
            for j in range(k):
                P[n + 1, j] = ((xv[j] - b_n) * P[n, j] - a_n * P[n - 1, j]) / a_next
    return out


def christoffel_sums(double alpha, double beta, Py_ssize_t count, x):
    """sum_{j<count} p_j(x)^2 at each point, without storing the table."""
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t k = xv.shape[0]
    out = np.empty(k, dtype=np.float64)
    cdef double[::1] acc = out
    cdef Py_ssize_t n, j
    cdef Py_ssize_t steps = count + 1 if count > 0 else 2
    a_arr = np.empty(steps, dtype=np.float64)
    b_arr = np.empty(steps, dtype=np.float64)
    cdef double[::1] A = a_arr
    cdef double[::1] B = b_arr
    prev_arr = np.zeros(k, dtype=np.float64)
    cur_arr = np.full(k, _p0(alpha, beta), dtype=np.float64)
    cdef double[::1] prev = prev_arr
    cdef double[::1] cur = cur_arr
    cdef double nxt
    with nogil:
        for n in range(steps):
            _coeffs(alpha, beta, n, &A[n], &B[n])
        for j in range(k):
            acc[j] = cur[j] * cur[j]
        # point loop innermost: the divisions are independent and pipeline
        for n in range(0, count - 1):
            for j in range(k):
                nxt = ((xv[j] - B[n]) * cur[j] - A[n] * prev[j]) / A[n + 1]
                prev[j] = cur[j]
                cur[j] = nxt
                acc[j] = acc[j] + nxt * nxt
    return out


def hilbert_naive(f):
    cdef const double[::1] fv = np.ascontiguousarray(f, dtype=np.float64)
    cdef Py_ssize_t N = fv.shape[0], n, m
    out = np.zeros(N, dtype=np.float64)
    cdef double[::1] o = out
    cdef double acc
    with nogil:
        for n in range(N):
            acc = 0.0
            for m in range(N):
                if m != n:
                    acc = acc + fv[m] / <double>(n - m)
            o[n] = acc
    return out


def q_naive(f, double a, bint include_diagonal=False):
    cdef const double[::1] fv = np.ascontiguousarray(f, dtype=np.float64)
    cdef Py_ssize_t N = fv.shape[0], n, m
    out = np.zeros(N, dtype=np.float64)
    cdef double[::1] o = out
    cdef double acc, d
    with nogil:
        for n in range(N):
            acc = 0.0
            for m in range(N):
                if m == n and not include_diagonal:
                    continue
                d = n + m + a
                if d == 0.0:
                    continue
                acc = acc + fv[m] / d
            o[n] = acc
    return out


def ap_windows(w, double p):
    """Supremum of the A_p window quotient over all windows of ``w``."""
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t N = wv.shape[0], n, m
    cdef double best = 0.0, sw, sv, vmax, q, L
    cdef bint one = p == 1.0
    cdef bint two = p == 2.0
    # w^(-1/(p-1)) for p > 1, 1/w for p = 1
    v_arr = 1.0 / np.asarray(wv) if one else np.asarray(wv) ** (-1.0 / (p - 1.0))
    cdef const double[::1] v = v_arr
    with nogil:
        for n in range(N):
            sw = 0.0
            sv = 0.0
            vmax = 0.0
            for m in range(n, N):
                L = m - n + 1.0
                sw = sw + wv[m]
                if one:
                    if v[m] > vmax:
                        vmax = v[m]
                    q = (sw / L) * vmax
                elif two:
                    sv = sv + v[m]
                    q = (sw * sv) / (L * L)
                else:
                    sv = sv + v[m]
                    q = (sw / L) * pow(sv / L, p - 1.0)
                if q > best:
                    best = q
    return best
