"""The multiplier kernel K_{[a,b]}(m, n) = int_a^b p_m p_n dmu and the edge
weights used to split it into Hilbert-type pieces.

Off the diagonal the kernel comes from the boundary term of the Jacobi
operator's Green identity, which costs O(1) per entry once p_n(b) and
p_n'(b) are known. Diagonal entries are integrals of p_n^2 and are computed
by quadrature, in fixed blocks so that a value never depends on how many
neighbours were requested with it.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from jacobimult.jacobi import (
    JacobiParams,
    eigenvalue_gap,
    orthonormal_all,
    orthonormal_derivative_all,
)
from jacobimult.quadrature import DEFAULT_TOL, integrate_measure

DIAGONAL_BLOCK = 256


def _check_b(b):
    if not -1.0 <= b <= 1.0:
        raise ValueError(f"b={b} outside [-1, 1]")


def _diagonal_block(params, b, block, tol):
    lo, hi = block * DIAGONAL_BLOCK, (block + 1) * DIAGONAL_BLOCK

    def squares(x):
        return orthonormal_all(params, hi - 1, x)[lo:] ** 2

    # p_n^2 at the nodes is only good to a few dozen n eps (recurrence plus node error)
    noise = 64 * np.finfo(float).eps * hi

    # integrate over the shorter side of b so that b -> 1 does not cancel
    if b <= 0.0:
        return np.asarray(integrate_measure(params, squares, -1.0, b, tol, k0=hi + 16, noise=noise))
    tail = np.asarray(integrate_measure(params, squares, b, 1.0, tol, k0=hi + 16, noise=noise))
    return 1.0 - tail


class DiagonalCache:
    """Memo of K_b(n, n) keyed by (alpha, beta, b, tol, block).

    Thread safe: lookups are lock-free reads of immutable arrays, insertion
    holds a lock. With ``directory`` set, blocks are also written to disk as
    ``.npy`` files (atomic rename) and picked up by later processes.
    """

    def __init__(self, directory=None):
        self.directory = Path(directory) if directory else None
        self._mem = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    @staticmethod
    def key(params, b, tol, block):
        raw = "|".join(float(v).hex() for v in (params.alpha, params.beta, b, tol))
        return hashlib.sha1(f"{raw}|{block}".encode()).hexdigest()

    def _load(self, key):
        if self.directory is None:
            return None
        path = self.directory / f"{key}.npy"
        if path.exists():
            return np.load(path)
        return None

    def _store(self, key, values):
        if self.directory is None:
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        with os.fdopen(fd, "wb") as fh:
            np.save(fh, values)
        os.replace(tmp, self.directory / f"{key}.npy")

    def block(self, params, b, block, tol):
        key = self.key(params, b, tol, block)
        values = self._mem.get(key)
        if values is None:
            values = self._load(key)
        if values is not None:
            self.hits += 1
            self._mem.setdefault(key, values)
            return values
        self.misses += 1
        values = _diagonal_block(params, b, block, tol)
        values.setflags(write=False)
        with self._lock:
            if key not in self._mem:
                self._mem[key] = values
                self._store(key, values)
        return self._mem[key]


_default_cache = DiagonalCache()


def default_cache() -> DiagonalCache:
    return _default_cache


def set_default_cache(cache: DiagonalCache):
    global _default_cache
    _default_cache = cache


def diagonal(params: JacobiParams, b: float, n_max: int, tol: float = DEFAULT_TOL,
             cache: DiagonalCache | None = None) -> np.ndarray:
    """K_b(n, n) for n < n_max."""
    _check_b(b)
    if b == 1.0:
        return np.ones(n_max)
    if b == -1.0:
        return np.zeros(n_max)
    cache = cache or _default_cache
    blocks = [cache.block(params, b, j, tol) for j in range(-(-n_max // DIAGONAL_BLOCK))]
    return np.concatenate(blocks)[:n_max] if blocks else np.zeros(0)


def _offdiag_matrix(params, b, rows, n_count):
    rows = np.asarray(rows, dtype=np.int64)
    top = max(n_count, int(rows.max()) + 1 if rows.size else 0)
    p = orthonormal_all(params, top - 1, b)
    dp = orthonormal_derivative_all(params, top - 1, b)
    n = np.arange(n_count)
    m = rows[:, None]
    pref = (1.0 - b) ** (params.alpha + 1.0) * (1.0 + b) ** (params.beta + 1.0)
    gap = eigenvalue_gap(params, n[None, :], m).astype(np.float64)
    bracket = p[None, :n_count] * dp[rows][:, None] - dp[None, :n_count] * p[rows][:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        out = pref * bracket / gap
    out[gap == 0] = 0.0
    return out


def halfline_matrix(params: JacobiParams, b: float, rows, n_count: int,
                    tol: float = DEFAULT_TOL, cache: DiagonalCache | None = None) -> np.ndarray:
    """K_b(m, n) for m in ``rows`` and n < n_count."""
    _check_b(b)
    rows = np.atleast_1d(np.asarray(rows, dtype=np.int64))
    n = np.arange(n_count)
    if b == 1.0:
        return (rows[:, None] == n[None, :]).astype(np.float64)
    if b == -1.0:
        return np.zeros((rows.size, n_count))
    out = _offdiag_matrix(params, b, rows, n_count)
    inside = rows < n_count
    if np.any(inside):
        top = int(rows[inside].max()) + 1
        d = diagonal(params, b, top, tol, cache)
        idx = np.nonzero(inside)[0]
        out[idx, rows[inside]] = d[rows[inside]]
    return out


def interval_matrix(params, a, b, rows, n_count, tol=DEFAULT_TOL, cache=None):
    if not -1.0 <= a <= b <= 1.0:
        raise ValueError(f"need -1 <= a <= b <= 1, got [{a}, {b}]")
    if a == b:
        return np.zeros((np.atleast_1d(rows).size, n_count))
    return (halfline_matrix(params, b, rows, n_count, tol, cache)
            - halfline_matrix(params, a, rows, n_count, tol, cache))


def kernel_halfline(params: JacobiParams, b: float, m: int, n: int,
                    tol: float = DEFAULT_TOL, cache=None) -> float:
    """K_b(m, n) = int_{-1}^b p_m p_n dmu."""
    if m < 0 or n < 0:
        raise ValueError("indices must be non-negative")
    return float(halfline_matrix(params, b, [m], max(m, n) + 1, tol, cache)[0, n])


def kernel_interval(params: JacobiParams, a: float, b: float, m: int, n: int,
                    tol: float = DEFAULT_TOL, cache=None) -> float:
    return float(interval_matrix(params, a, b, [m], max(m, n) + 1, tol, cache)[0, n])


def kernel_quadrature(params: JacobiParams, a: float, b: float, m: int, n: int,
                      tol: float = DEFAULT_TOL) -> float:
    """Direct quadrature of p_m p_n over [a, b]; the oracle for the closed form."""
    top = max(m, n)

    def integrand(x):
        t = orthonormal_all(params, top, x)
        return t[m] * t[n]

    return float(integrate_measure(params, integrand, a, b, tol, k0=top + 16))


def edge_weight_r(params: JacobiParams, b: float, n):
    """(1-b)^(alpha/2+1/4) (1+b)^(beta/2+1/4) p_n(b); vectorized over ``n``."""
    n = np.asarray(n)
    top = int(np.max(n))
    p = orthonormal_all(params, top, b)[n]
    return (1.0 - b) ** (params.alpha / 2 + 0.25) * (1.0 + b) ** (params.beta / 2 + 0.25) * p


def edge_weight_R(params: JacobiParams, b: float, n):
    """(1-b)^(alpha/2+3/4) (1+b)^(beta/2+3/4) p_n'(b) / (2n+alpha+beta+1)."""
    n = np.asarray(n)
    top = int(np.max(n))
    dp = orthonormal_derivative_all(params, top, b)[n]
    denom = 2.0 * n + params.s
    pref = (1.0 - b) ** (params.alpha / 2 + 0.75) * (1.0 + b) ** (params.beta / 2 + 0.75)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = pref * dp / denom
    # n = 0 with alpha + beta + 1 = 0: p_0' vanishes, so does the weight
    return np.where(denom == 0, 0.0, out)


def truncated_edge_factor(r: float, s: float, b: float, n):
    if r < 0 or s < 0:
        raise ValueError("exponents must be non-negative")
    h = 1.0 / (np.asarray(n, dtype=np.float64) + 1.0) ** 2
    return ((1.0 - b) / (1.0 - b + h)) ** r * ((1.0 + b) / (1.0 + b + h)) ** s


@dataclass
class KernelSlice:
    """One row n -> K_{[a,b]}(m, n), n < trunc."""

    params: JacobiParams
    m: int
    interval: tuple
    values: np.ndarray
    decay_constant: float = field(init=False)

    def __post_init__(self):
        n = np.arange(self.values.size)
        off = n != self.m
        self.decay_constant = float(np.max(np.abs(self.values[off]) * np.abs(n[off] - self.m),
                                           initial=0.0))

    @property
    def trunc(self) -> int:
        return self.values.size

    def to_csv(self) -> str:
        a, b = self.interval
        lines = [f"# alpha={self.params.alpha!r} beta={self.params.beta!r} a={a!r} b={b!r} "
                 f"m={self.m} N={self.trunc}", "n,value"]
        lines += [f"{i},{v:.17g}" for i, v in enumerate(self.values)]
        return "\n".join(lines) + "\n"


def kernel_slice(params, a, b, m, n_count, tol=DEFAULT_TOL, cache=None) -> KernelSlice:
    values = interval_matrix(params, a, b, [m], n_count, tol, cache)[0]
    return KernelSlice(params, m, (a, b), values)
