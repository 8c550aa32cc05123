"""Finite sequences on {0, ..., N-1}: weighted norms, discrete A_p constants,
and the discrete Hilbert, Q_a and Hardy operators.

All operators act on the truncation window only; nothing here models the
tail of an infinite sequence.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from jacobimult import _backend


@dataclass(frozen=True, eq=False)
class FiniteSequence:
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64).ravel()
        if v.size < 1:
            raise ValueError("a sequence needs at least one entry")
        if not np.all(np.isfinite(v)):
            raise ValueError("sequence values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def trunc(self) -> int:
        return self.values.size

    def __len__(self):
        return self.values.size

    def __getitem__(self, i):
        return self.values[i]

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __repr__(self):
        return f"FiniteSequence(trunc={self.trunc}, values={self.values!r})"

    @classmethod
    def delta(cls, k: int, n: int | None = None) -> "FiniteSequence":
        n = k + 1 if n is None else n
        v = np.zeros(n)
        v[k] = 1.0
        return cls(v)

    @classmethod
    def zeros(cls, n: int) -> "FiniteSequence":
        return cls(np.zeros(n))

    def resized(self, n: int) -> "FiniteSequence":
        """Zero-pad or cut to length ``n``."""
        v = np.zeros(n)
        k = min(n, self.trunc)
        v[:k] = self.values[:k]
        return FiniteSequence(v)

    def support_top(self) -> int:
        """Largest index with a nonzero value (-1 for the zero sequence)."""
        nz = np.nonzero(self.values)[0]
        return int(nz[-1]) if nz.size else -1

    def to_csv(self) -> str:
        return "index,value\n" + "".join(f"{i},{v:.17g}\n" for i, v in enumerate(self.values))

    @classmethod
    def from_csv(cls, source) -> "FiniteSequence":
        text = Path(source).read_text() if not isinstance(source, io.StringIO) else source.getvalue()
        rows = [r for r in csv.reader(line for line in text.splitlines()
                                      if line.strip() and not line.startswith("#"))]
        if rows and not _is_number(rows[0][0]):
            rows = rows[1:]
        pairs = {int(r[0]): float(r[1]) for r in rows}
        if not pairs:
            raise ValueError("empty sequence file")
        v = np.zeros(max(pairs) + 1)
        for i, x in pairs.items():
            v[i] = x
        return cls(v)


def _is_number(s):
    try:
        float(s)
    except ValueError:
        return False
    return True


def as_values(f) -> np.ndarray:
    return f.values if isinstance(f, FiniteSequence) else np.asarray(f, dtype=np.float64)


def parse_sequence(spec: str) -> FiniteSequence:
    """Build a sequence from ``delta:k``, ``const:c:N``, ``pow:g:N`` or ``file:path``.

    ``pow:g:N`` is (n+1)^g for n < N.
    """
    kind, _, rest = spec.partition(":")
    parts = rest.split(":") if rest else []
    try:
        if kind == "delta" and len(parts) == 1:
            return FiniteSequence.delta(int(parts[0]))
        if kind == "const" and len(parts) == 2:
            return FiniteSequence(np.full(int(parts[1]), float(parts[0])))
        if kind == "pow" and len(parts) == 2:
            return FiniteSequence((np.arange(int(parts[1])) + 1.0) ** float(parts[0]))
        if kind == "file" and rest:
            return FiniteSequence.from_csv(rest)
    except (ValueError, IndexError) as exc:
        raise ValueError(f"bad sequence spec {spec!r}: {exc}") from exc
    raise ValueError(f"bad sequence spec {spec!r}")


@dataclass(frozen=True, eq=False)
class WeightSeq:
    values: np.ndarray
    tag: str = "custom"

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64).ravel()
        if v.size < 1 or not np.all(v > 0) or not np.all(np.isfinite(v)):
            raise ValueError("weights must be finite and strictly positive")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def trunc(self) -> int:
        return self.values.size

    @classmethod
    def constant(cls, n: int, c: float = 1.0) -> "WeightSeq":
        return cls(np.full(n, float(c)), f"const:{c!r}")

    @classmethod
    def power(cls, n: int, gamma: float) -> "WeightSeq":
        return cls((np.arange(n) + 1.0) ** gamma, f"pow:{gamma!r}")

    @classmethod
    def custom(cls, values) -> "WeightSeq":
        return cls(values, "custom")

    def scaled(self, c: float) -> "WeightSeq":
        return WeightSeq(self.values * c, self.tag)


def parse_weight(spec: str, n: int) -> WeightSeq:
    """``const:c``, ``pow:g`` (w(k) = (k+1)^g) or ``file:path``."""
    kind, _, rest = spec.partition(":")
    if kind == "const":
        return WeightSeq.constant(n, float(rest or 1.0))
    if kind == "pow":
        return WeightSeq.power(n, float(rest))
    if kind == "file":
        return WeightSeq.custom(FiniteSequence.from_csv(rest).values)
    raise ValueError(f"bad weight spec {spec!r}")


def _weights_for(f, w):
    if w is None:
        return np.ones(f.size)
    wv = w.values if isinstance(w, WeightSeq) else np.asarray(w, dtype=np.float64)
    if wv.size < f.size:
        raise ValueError(f"weight has {wv.size} entries, sequence has {f.size}")
    return wv[:f.size]


def lp_norm(f, p: float, w: WeightSeq | None = None) -> float:
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    v = as_values(f)
    wv = _weights_for(v, w)
    return float(np.sum(np.abs(v) ** p * wv) ** (1.0 / p))


def weak_l1_norm(f, w: WeightSeq | None = None) -> float:
    """sup_t t * w({|f| > t}), attained as t rises to one of the |f| values."""
    v = np.abs(as_values(f))
    wv = _weights_for(v, w)
    order = np.argsort(-v, kind="stable")
    mags, cum = v[order], np.cumsum(wv[order])
    # for tied magnitudes the level set includes the whole tie group
    last_of_group = np.r_[mags[1:] != mags[:-1], True]
    return float(np.max(mags[last_of_group] * cum[last_of_group], initial=0.0))


def ap_constant(w: WeightSeq, p: float, N: int | None = None) -> float:
    """Exact discrete A_p constant of w restricted to {0, ..., N-1}."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    N = w.trunc if N is None else N
    if N > w.trunc:
        raise ValueError(f"N={N} exceeds weight length {w.trunc}")
    return float(_backend.ap_windows(w.values[:N], float(p)))


def _fft_size(n):
    return 1 << max(1, (2 * n - 1).bit_length())


def _check_mode(mode):
    if mode not in ("naive", "fast"):
        raise ValueError(f"mode must be 'naive' or 'fast', got {mode!r}")


def hilbert_transform(f, mode: str = "fast") -> FiniteSequence:
    """Hf(n) = sum_{m != n} f(m) / (n - m) over the window."""
    _check_mode(mode)
    v = as_values(f)
    if mode == "naive":
        return FiniteSequence(_backend.hilbert_naive(v))
    N = v.size
    L = _fft_size(N)
    k = np.zeros(L)
    j = np.arange(1, N)
    k[j] = 1.0 / j
    k[L - j] = -1.0 / j
    out = np.fft.irfft(np.fft.rfft(v, L) * np.fft.rfft(k), L)[:N]
    return FiniteSequence(out)


def q_transform(f, a: float, mode: str = "fast", include_diagonal: bool = False) -> FiniteSequence:
    """Q_a f(n) = sum_{m != n} f(m) / (n + m + a) over the window."""
    _check_mode(mode)
    if a < 0:
        raise ValueError(f"a must be >= 0, got {a}")
    v = as_values(f)
    if mode == "naive":
        return FiniteSequence(_backend.q_naive(v, float(a), include_diagonal))
    N = v.size
    L = _fft_size(N)
    j = np.arange(2 * N - 1, dtype=np.float64) + a
    g = np.zeros(L)
    with np.errstate(divide="ignore"):
        g[:2 * N - 1] = np.where(j > 0, 1.0 / j, 0.0)
    # sum_m f(m) g(n+m) is a convolution of the reversed f with g
    full = np.fft.irfft(np.fft.rfft(v[::-1], L) * np.fft.rfft(g), L)
    out = full[N - 1:2 * N - 1].copy()
    if not include_diagonal:
        d = 2.0 * np.arange(N) + a
        with np.errstate(divide="ignore", invalid="ignore"):
            out -= np.where(d > 0, v / d, 0.0)
    return FiniteSequence(out)


def hardy(f, absolute: bool = True) -> FiniteSequence:
    """O_1 f(n) = (1/(n+1)) sum_{m <= n} |f(m)|."""
    v = as_values(f)
    v = np.abs(v) if absolute else v
    return FiniteSequence(np.cumsum(v) / (np.arange(v.size) + 1.0))


def adjoint_hardy(f, absolute: bool = True) -> FiniteSequence:
    """O_2 f(n) = sum_{n <= m < N} |f(m)| / (m+1)."""
    v = as_values(f)
    v = np.abs(v) if absolute else v
    t = v / (np.arange(v.size) + 1.0)
    return FiniteSequence(np.cumsum(t[::-1])[::-1])
