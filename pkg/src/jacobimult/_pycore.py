"""Pure numpy implementations of the inner loops in ``_core.pyx``."""

import numpy as np
from math import lgamma, log, exp

_BLOCK = 512


def _coeff_arrays(alpha, beta, nmax):
    s = alpha + beta
    n = np.arange(nmax + 2, dtype=np.float64)
    t = 2.0 * n + s
    with np.errstate(divide="ignore", invalid="ignore"):
        b = (beta * beta - alpha * alpha) / (t * (t + 2.0))
        a = 2.0 / t * np.sqrt(n * (n + alpha) * (n + beta) * (n + s) / ((t - 1.0) * (t + 1.0)))
    b[0] = (beta - alpha) / (s + 2.0)
    a[0] = 0.0
    if nmax + 2 > 1:
        a[1] = np.sqrt(4.0 * (alpha + 1.0) * (beta + 1.0) / ((s + 2.0) ** 2 * (s + 3.0)))
    return a, b


def _p0(alpha, beta):
    return exp(0.5 * (lgamma(alpha + beta + 2.0) - (alpha + beta + 1.0) * log(2.0)
                      - lgamma(alpha + 1.0) - lgamma(beta + 1.0)))


def orthonormal_table(alpha, beta, nmax, x):
    x = np.ascontiguousarray(x, dtype=np.float64).ravel()
    out = np.empty((nmax + 1, x.size))
    out[0] = _p0(alpha, beta)
    if nmax == 0:
        return out
    a, b = _coeff_arrays(alpha, beta, nmax)
    out[1] = (x - b[0]) * out[0] / a[1]
    for n in range(1, nmax):
        out[n + 1] = ((x - b[n]) * out[n] - a[n] * out[n - 1]) / a[n + 1]
    return out


def christoffel_sums(alpha, beta, count, x):
    x = np.ascontiguousarray(x, dtype=np.float64).ravel()
    a, b = _coeff_arrays(alpha, beta, max(count, 1))
    prev = np.zeros_like(x)
    cur = np.full_like(x, _p0(alpha, beta))
    acc = cur * cur
    for n in range(count - 1):
        prev, cur = cur, ((x - b[n]) * cur - a[n] * prev) / a[n + 1]
        acc += cur * cur
    return acc


def hilbert_naive(f):
    f = np.ascontiguousarray(f, dtype=np.float64)
    N = f.size
    m = np.arange(N)
    out = np.empty(N)
    for start in range(0, N, _BLOCK):
        n = np.arange(start, min(start + _BLOCK, N))[:, None]
        d = (n - m).astype(np.float64)
        with np.errstate(divide="ignore"):
            k = np.where(d != 0, 1.0 / d, 0.0)
        out[start:start + n.shape[0]] = k @ f
    return out


def q_naive(f, a, include_diagonal=False):
    f = np.ascontiguousarray(f, dtype=np.float64)
    N = f.size
    m = np.arange(N)
    out = np.empty(N)
    for start in range(0, N, _BLOCK):
        n = np.arange(start, min(start + _BLOCK, N))[:, None]
        d = n + m + float(a)
        mask = d != 0
        if not include_diagonal:
            mask &= n != m
        with np.errstate(divide="ignore"):
            k = np.where(mask, 1.0 / np.where(d == 0, 1.0, d), 0.0)
        out[start:start + n.shape[0]] = k @ f
    return out


def ap_windows(w, p):
    w = np.ascontiguousarray(w, dtype=np.float64)
    N = w.size
    sw = np.concatenate([[0.0], np.cumsum(w)])
    best = 0.0
    if p == 1.0:
        inv = 1.0 / w
        for n in range(N):
            L = np.arange(1, N - n + 1, dtype=np.float64)
            q = (sw[n + 1:] - sw[n]) / L * np.maximum.accumulate(inv[n:])
            best = max(best, float(q.max()))
        return best
    sv = np.concatenate([[0.0], np.cumsum(w ** (-1.0 / (p - 1.0)))])
    for n in range(N):
        L = np.arange(1, N - n + 1, dtype=np.float64)
        q = (sw[n + 1:] - sw[n]) / L * ((sv[n + 1:] - sv[n]) / L) ** (p - 1.0)
        best = max(best, float(q.max()))
    return best
