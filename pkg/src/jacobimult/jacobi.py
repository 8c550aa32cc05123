"""Jacobi polynomials: classical and orthonormal values, derivatives,
normalization constants, eigenvalues, envelope bounds and the large-degree
oscillatory approximation.

Scalar routines use the classical three-term recurrence; the batch routines
(:func:`orthonormal_all`, :func:`orthonormal_derivative_all`) run the
orthonormal recurrence in the compiled core and are what the kernel and
quadrature modules use.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, lgamma, log, exp, pi, sin, sqrt

import numpy as np

from jacobimult import _backend

#: Default lower cutoff ``theta > DELTA / n`` for :func:`asymptotic_approx`.
DELTA = 1.0

#: Amplitude of the two-term oscillatory approximation.
AMPLITUDE = sqrt(2.0 / pi)


@dataclass(frozen=True)
class JacobiParams:
    """Exponents of the measure (1-x)^alpha (1+x)^beta dx on [-1, 1]."""

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (a > -1.0 and b > -1.0):
            raise ValueError(f"need alpha, beta > -1, got alpha={a}, beta={b}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def standard_range(self) -> bool:
        return self.alpha >= -0.5 and self.beta >= -0.5

    @property
    def s(self) -> float:
        """alpha + beta + 1, the shift in the eigenvalues and in Q_a."""
        return self.alpha + self.beta + 1.0

    def swapped(self) -> "JacobiParams":
        return JacobiParams(self.beta, self.alpha)


def _check_x(x):
    if not -1.0 <= x <= 1.0:
        raise ValueError(f"x={x} outside [-1, 1]")


def _check_n(n):
    if n < 0:
        raise ValueError(f"degree must be non-negative, got {n}")


def jacobi_unnormalized(params: JacobiParams, n: int, x: float) -> float:
    """Classical P_n^(alpha,beta)(x) by forward recurrence."""
    _check_n(n)
    _check_x(x)
    a, b = params.alpha, params.beta
    p_prev = 1.0
    if n == 0:
        return p_prev
    p = 0.5 * (a + b + 2.0) * x + 0.5 * (a - b)
    ab = a + b
    for k in range(2, n + 1):
        t = 2.0 * k + ab
        c1 = 2.0 * k * (k + ab) * (t - 2.0)
        c2 = (t - 1.0) * (a * a - b * b)
        c3 = (t - 2.0) * (t - 1.0) * t
        c4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * t
        p_prev, p = p, ((c2 + c3 * x) * p - c4 * p_prev) / c1
    return p


def log_normalization(params: JacobiParams, n: int) -> float:
    _check_n(n)
    a, b = params.alpha, params.beta
    if n == 0:
        return 0.5 * (lgamma(a + b + 2.0) - (a + b + 1.0) * log(2.0)
                      - lgamma(a + 1.0) - lgamma(b + 1.0))
    return 0.5 * (log(2.0 * n + a + b + 1.0) + lgamma(n + 1.0) + lgamma(n + a + b + 1.0)
                  - (a + b + 1.0) * log(2.0) - lgamma(n + a + 1.0) - lgamma(n + b + 1.0))


def normalization(params: JacobiParams, n: int) -> float:
    """Reciprocal L^2(dmu) norm of P_n, evaluated through log-gamma."""
    return exp(log_normalization(params, n))


def orthonormal(params: JacobiParams, n: int, x: float) -> float:
    return normalization(params, n) * jacobi_unnormalized(params, n, x)


def orthonormal_derivative(params: JacobiParams, n: int, x: float) -> float:
    if n == 0:
        _check_x(x)
        return 0.0
    shifted = JacobiParams(params.alpha + 1.0, params.beta + 1.0)
    return (normalization(params, n) * 0.5 * (n + params.alpha + params.beta + 1.0)
            * jacobi_unnormalized(shifted, n - 1, x))


def eigenvalue(params: JacobiParams, n: int) -> float:
    _check_n(n)
    return n * (n + params.s)


def eigenvalue_gap(params: JacobiParams, n, m):
    """lambda_n - lambda_m, factored to avoid cancellation for close indices."""
    return (np.asarray(n) - m) * (np.asarray(n) + m + params.s)


def orthonormal_all(params: JacobiParams, nmax: int, x) -> np.ndarray:
    """Table of p_0..p_nmax at ``x``; shape ``(nmax + 1, *np.shape(x))``."""
    _check_n(nmax)
    xa = np.asarray(x, dtype=np.float64)
    if np.any(np.abs(xa) > 1.0):
        raise ValueError("points outside [-1, 1]")
    table = _backend.orthonormal_table(params.alpha, params.beta, nmax, xa)
    return table.reshape((nmax + 1,) + xa.shape)


def orthonormal_derivative_all(params: JacobiParams, nmax: int, x) -> np.ndarray:
    """Table of p_0'..p_nmax' at ``x``.

    Uses p_n' = sqrt(lambda_n) * p_{n-1}^(alpha+1, beta+1), which is the
    classical derivative identity with the normalization ratio collapsed.
    """
    xa = np.asarray(x, dtype=np.float64)
    out = np.zeros((nmax + 1,) + xa.shape)
    if nmax == 0:
        return out
    shifted = JacobiParams(params.alpha + 1.0, params.beta + 1.0)
    lower = orthonormal_all(shifted, nmax - 1, xa)
    n = np.arange(1, nmax + 1, dtype=np.float64)
    scale = np.sqrt(n * (n + params.s))
    out[1:] = scale.reshape((-1,) + (1,) * xa.ndim) * lower
    return out


def envelope_bound(params: JacobiParams, n: int, x: float) -> float:
    """Piecewise growth profile of |p_n(x)| up to a constant factor."""
    _check_n(n)
    _check_x(x)
    a, b = params.alpha, params.beta
    h = 1.0 / (n + 1.0) ** 2
    if x > 1.0 - h:
        return (n + 1.0) ** (a + 0.5)
    if x < -1.0 + h:
        return (n + 1.0) ** (b + 0.5)
    return (1.0 - x) ** (-a / 2 - 0.25) * (1.0 + x) ** (-b / 2 - 0.25)


def phase(params: JacobiParams) -> float:
    return (2.0 * params.alpha + 1.0) * pi / 4.0


def asymptotic_approx(params: JacobiParams, n: int, theta: float, delta: float = DELTA) -> float:
    """Two-term approximation of 2^((alpha+beta+1)/2) p_n(cos theta).

    Valid for delta/n < theta <= pi/2; the error is O(1/n) there.
    """
    _check_n(n)
    if not 0.0 < theta <= pi / 2:
        raise ValueError(f"theta={theta} outside (0, pi/2]")
    if n > 0 and theta <= delta / n:
        raise ValueError(f"theta={theta} below the validity cutoff {delta}/{n}")
    a, b = params.alpha, params.beta
    big_n = n + params.s / 2.0
    arg = big_n * theta - phase(params)
    envelope = sin(theta / 2) ** (-(a + 0.5)) * cos(theta / 2) ** (-(b + 0.5))
    return envelope * AMPLITUDE * (cos(arg) + sin(arg) / (big_n * theta))
