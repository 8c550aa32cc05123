"""The interval multiplier T_{[a,b]} on finite sequences.

Two evaluation routes are provided. :func:`apply_direct` sums the kernel
matrix. :func:`apply_fast` writes the half-line operator as

    T_b f = r H(R f) - R H(r f) - r Q_s(R f) - R Q_s(r f) + f * diag(K_b)

with s = alpha + beta + 1 and r, R the edge weights, which reduces the
off-diagonal work to four FFT convolutions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import zeta

from jacobimult.jacobi import JacobiParams
from jacobimult.kernel import (
    DiagonalCache,
    diagonal,
    edge_weight_R,
    edge_weight_r,
    interval_matrix,
)
from jacobimult.quadrature import DEFAULT_TOL
from jacobimult.seq_ops import FiniteSequence, as_values, hilbert_transform, lp_norm, q_transform


@dataclass(frozen=True)
class MultiplierSpec:
    params: JacobiParams
    a: float
    b: float
    n_out: int
    n_in: int
    allow_nonstandard: bool = False

    def __post_init__(self):
        if not -1.0 <= self.a <= self.b <= 1.0:
            raise ValueError(f"need -1 <= a <= b <= 1, got [{self.a}, {self.b}]")
        if self.n_out < 1 or self.n_in < 1:
            raise ValueError("truncations must be positive")
        if not (self.params.standard_range or self.allow_nonstandard):
            raise ValueError("alpha, beta >= -1/2 required (set allow_nonstandard to override)")


def default_n_out(f) -> int:
    """4x the top support index plus 64."""
    top = FiniteSequence(as_values(f)).support_top()
    return 4 * max(top, 0) + 64


def _input(spec, f):
    v = as_values(f)
    if v.size != spec.n_in:
        raise ValueError(f"sequence has {v.size} entries, spec expects n_in={spec.n_in}")
    return v


def apply_direct(spec: MultiplierSpec, f, tol: float = DEFAULT_TOL,
                 cache: DiagonalCache | None = None) -> FiniteSequence:
    v = _input(spec, f)
    rows = np.nonzero(v)[0]
    if rows.size == 0:
        return FiniteSequence.zeros(spec.n_out)
    K = interval_matrix(spec.params, spec.a, spec.b, rows, spec.n_out, tol, cache)
    return FiniteSequence(v[rows] @ K)


def halfline_fast(params: JacobiParams, b: float, v: np.ndarray, n_out: int,
                  tol: float = DEFAULT_TOL, cache: DiagonalCache | None = None) -> np.ndarray:
    """T_b applied to ``v`` via the Hilbert/Q decomposition, first ``n_out`` entries."""
    if b == 1.0:
        out = np.zeros(n_out)
        k = min(n_out, v.size)
        out[:k] = v[:k]
        return out
    if b == -1.0:
        return np.zeros(n_out)
    L = max(n_out, v.size)
    f = np.zeros(L)
    f[:v.size] = v
    n = np.arange(L)
    r = edge_weight_r(params, b, n)
    R = edge_weight_R(params, b, n)
    s = params.s
    h_rf, h_Rf = hilbert_transform(r * f).values, hilbert_transform(R * f).values
    q_rf, q_Rf = q_transform(r * f, s).values, q_transform(R * f, s).values
    out = r * h_Rf - R * h_rf - r * q_Rf - R * q_rf
    top = min(v.size, n_out)
    out[:top] += v[:top] * diagonal(params, b, top, tol, cache)
    return out[:n_out]


def apply_fast(spec: MultiplierSpec, f, tol: float = DEFAULT_TOL,
               cache: DiagonalCache | None = None) -> FiniteSequence:
    if not spec.params.standard_range:
        raise ValueError("the decomposition needs alpha, beta >= -1/2")
    v = _input(spec, f)
    if spec.a == spec.b:
        return FiniteSequence.zeros(spec.n_out)
    out = halfline_fast(spec.params, spec.b, v, spec.n_out, tol, cache)
    if spec.a > -1.0:
        out = out - halfline_fast(spec.params, spec.a, v, spec.n_out, tol, cache)
    return FiniteSequence(out)


def apply(spec: MultiplierSpec, f, fast: bool = False, tol=DEFAULT_TOL, cache=None):
    return (apply_fast if fast else apply_direct)(spec, f, tol, cache)


def symmetric_multiplier(params: JacobiParams, r: float, f, n_out: int | None = None,
                         fast: bool = True, tol=DEFAULT_TOL, cache=None) -> FiniteSequence:
    """T_{[-r, r]} f."""
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must lie in (0, 1), got {r}")
    v = as_values(f)
    n_out = default_n_out(v) if n_out is None else n_out
    spec = MultiplierSpec(params, -r, r, n_out, v.size)
    return apply(spec, v, fast, tol, cache)


@dataclass(frozen=True)
class ConvergenceEstimate:
    """||T_r f - f||_p on the window [0, n_out) plus a bound on what lies beyond.

    For p = 1 the tail is not summable, so ``tail_bound`` is infinite and the
    window value is only a lower bound.
    """

    error: float
    tail_bound: float
    decay_constant: float
    n_out: int
    p: float

    @property
    def lower_bound_only(self) -> bool:
        return self.p == 1.0

    def __float__(self):
        return self.error


def convergence_error(params: JacobiParams, r: float, f, p: float, n_out: int | None = None,
                      fast: bool = True, tol=DEFAULT_TOL, cache=None) -> ConvergenceEstimate:
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    v = as_values(f)
    n_out = default_n_out(v) if n_out is None else n_out
    diff = symmetric_multiplier(params, r, v, n_out, fast, tol, cache).values.copy()
    k = min(v.size, n_out)
    diff[:k] -= v[:k]
    err = lp_norm(diff, p)
    top = FiniteSequence(v).support_top()
    n = np.arange(n_out)
    beyond = n > top
    c_emp = float(np.max(np.abs(diff[beyond]) * (n[beyond] - top), initial=0.0))
    if p == 1.0:
        tail = float("inf") if c_emp > 0 else 0.0
    else:
        tail = c_emp * float(zeta(p, n_out - top)) ** (1.0 / p)
    return ConvergenceEstimate(err, tail, c_emp, n_out, p)
