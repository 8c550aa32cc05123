"""Experiment drivers producing :class:`ExperimentReport` tables.

Each driver evaluates independent grid points (optionally on a thread pool)
and assembles rows in grid order, so the CSV output is reproducible.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from jacobimult.jacobi import JacobiParams
from jacobimult.kernel import interval_matrix
from jacobimult.multiplier import MultiplierSpec, apply, convergence_error
from jacobimult.quadrature import DEFAULT_TOL
from jacobimult.seq_ops import FiniteSequence, as_values, lp_norm, weak_l1_norm

DEFAULT_PARAM_GRID = [
    JacobiParams(-0.5, -0.5),
    JacobiParams(0.0, 0.0),
    JacobiParams(0.5, 0.5),
    JacobiParams(0.0, 1.3),
]

THREADS_ENV = "JACOBIMULT_THREADS"


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _map(fn, items, threads):
    threads = default_threads() if threads is None else threads
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


@dataclass
class ExperimentReport:
    name: str
    params: JacobiParams
    columns: list
    rows: list
    fit: tuple | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.rows:
            raise ValueError("a report needs at least one row")

    def column(self, name) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([row[i] for row in self.rows])

    def header(self) -> str:
        items = [f"experiment={self.name}", f"alpha={_fmt(self.params.alpha)}",
                 f"beta={_fmt(self.params.beta)}"]
        items += [f"{k}={_fmt(v)}" for k, v in self.meta.items()]
        if self.fit is not None:
            items += [f"fit_slope={_fmt(self.fit[0])}", f"fit_intercept={_fmt(self.fit[1])}",
                      f"fit_r2={_fmt(self.fit[2])}"]
        return "# " + " ".join(items)

    def to_csv(self) -> str:
        lines = [self.header(), ",".join(self.columns)]
        lines += [",".join(_fmt(v) for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        def plain(v):
            if isinstance(v, (np.integer,)):
                return int(v)
            if isinstance(v, (np.floating,)):
                return float(v)
            return v
        return {
            "experiment": self.name,
            "alpha": self.params.alpha,
            "beta": self.params.beta,
            "meta": {k: plain(v) for k, v in self.meta.items()},
            "fit": None if self.fit is None else dict(zip(("slope", "intercept", "r_squared"),
                                                          map(float, self.fit))),
            "columns": list(self.columns),
            "rows": [[plain(v) for v in row] for row in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=True) + "\n"


def fit_log(xs, ys):
    """OLS of y on log x; returns (slope, intercept, r_squared).

    r_squared is defined as 0 when y has no variance.
    """
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.size < 3 or x.size != y.size:
        raise ValueError("need at least three (x, y) pairs")
    if np.any(x <= 1):
        raise ValueError("x values must exceed 1")
    lx = np.log(x)
    sxx = np.sum((lx - lx.mean()) ** 2)
    if sxx == 0:
        raise ValueError("degenerate x range")
    slope = float(np.sum((lx - lx.mean()) * (y - y.mean())) / sxx)
    intercept = float(y.mean() - slope * lx.mean())
    sst = float(np.sum((y - y.mean()) ** 2))
    if sst == 0:
        return slope, intercept, 0.0
    sse = float(np.sum((y - (slope * lx + intercept)) ** 2))
    return slope, intercept, 1.0 - sse / sst


def _check_m_list(m_list):
    m = [int(v) for v in m_list]
    if any(v < 2 for v in m) or any(b <= a for a, b in zip(m, m[1:])):
        raise ValueError("m_list must be increasing with every m >= 2")
    return m


def divergence_sum(params: JacobiParams, m: int) -> float:
    """sum_{n=m+1}^{2m} |K_{[0, 1-1/m^2]}(m, n)| from the closed-form kernel."""
    b = 1.0 - 1.0 / m ** 2
    row = interval_matrix(params, 0.0, b, [m], 2 * m + 1)[0]
    return float(np.sum(np.abs(row[m + 1:2 * m + 1])))


def run_divergence(params: JacobiParams, m_list, threads=None) -> ExperimentReport:
    m_list = _check_m_list(m_list)
    sums = _map(lambda m: divergence_sum(params, m), m_list, threads)
    rows = [(m, 1.0 - 1.0 / m ** 2, m + 1, 2 * m, s) for m, s in zip(m_list, sums)]
    return ExperimentReport(
        "divergence", params, ["m", "b", "n_lo", "n_hi", "S"], rows,
        fit=fit_log(m_list, sums), meta={"a": 0.0, "kernel": "closed_form"})


def l1_growth_value(params: JacobiParams, m: int, tol=DEFAULT_TOL, cache=None) -> float:
    b = 1.0 - 1.0 / m ** 2
    spec = MultiplierSpec(params, 0.0, b, 4 * m, m + 1)
    return lp_norm(apply(spec, FiniteSequence.delta(m), tol=tol, cache=cache), 1.0)


def run_l1_growth(params: JacobiParams, m_list, tol=DEFAULT_TOL, threads=None,
                  cache=None) -> ExperimentReport:
    m_list = _check_m_list(m_list)
    values = _map(lambda m: l1_growth_value(params, m, tol, cache), m_list, threads)
    rows = [(m, 1.0 - 1.0 / m ** 2, 4 * m, 1.0, v, tol) for m, v in zip(m_list, values)]
    return ExperimentReport(
        "l1growth", params, ["m", "b", "n_out", "input_l1", "output_l1", "tol"], rows,
        fit=fit_log(m_list, values), meta={"a": 0.0, "label": "truncated_lower_bound"})


def run_convergence(params: JacobiParams, f, p: float, r_list, n_out=None, fast=True,
                    tol=DEFAULT_TOL, threads=None, cache=None) -> ExperimentReport:
    r_list = [float(r) for r in r_list]
    if any(not 0 < r < 1 for r in r_list) or any(b <= a for a, b in zip(r_list, r_list[1:])):
        raise ValueError("r_list must be increasing inside (0, 1)")
    v = as_values(f)
    est = _map(lambda r: convergence_error(params, r, v, p, n_out, fast, tol, cache),
               r_list, threads)
    rows = [(r, e.error, e.tail_bound, len(v), e.n_out, tol) for r, e in zip(r_list, est)]
    meta = {"p": p}
    if p == 1.0:
        meta["label"] = "truncated_lower_bound"
    return ExperimentReport("convergence", params,
                            ["r", "error", "tail_bound", "n_in", "n_out", "tol"], rows, meta=meta)


def run_boundedness_scan(params: JacobiParams, p: float, interval_grid, f_family,
                         n_out=None, fast=False, tol=DEFAULT_TOL, threads=None,
                         cache=None) -> ExperimentReport:
    """Largest ||T f|| / ||f|| over a grid of intervals and a family of inputs.

    For p = 1 the numerator is the weak l^1 norm.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    family = [as_values(f) for f in f_family]
    grid = [(float(a), float(b)) for a, b in interval_grid]
    n_out_eff = n_out or max(4 * len(f) + 64 for f in family)
    jobs = [(i, j) for i in range(len(grid)) for j in range(len(family))]

    def quotient(job):
        (a, b), f = grid[job[0]], family[job[1]]
        spec = MultiplierSpec(params, a, b, n_out_eff, f.size)
        out = apply(spec, f, fast and params.standard_range, tol, cache)
        top = weak_l1_norm(out) if p == 1.0 else lp_norm(out, p)
        return top / lp_norm(f, p)

    values = _map(quotient, jobs, threads)
    rows = [(grid[i][0], grid[i][1], j, q, n_out_eff) for (i, j), q in zip(jobs, values)]
    k = int(np.argmax(values))
    meta = {"p": p, "norm": "weak_l1" if p == 1.0 else "lp", "max_quotient": values[k],
            "argmax_a": rows[k][0], "argmax_b": rows[k][1], "argmax_f": rows[k][2]}
    return ExperimentReport("scan", params, ["a", "b", "f_index", "quotient", "n_out"],
                            rows, meta=meta)
