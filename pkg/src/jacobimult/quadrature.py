"""Gauss-Jacobi rules and integration against dmu_{alpha,beta} on subintervals."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import exp, lgamma, log

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from jacobimult import _backend
from jacobimult._pycore import _coeff_arrays
from jacobimult.jacobi import JacobiParams, orthonormal_all

DEFAULT_TOL = 1e-12
NODE_BUDGET = 2 ** 15
PANEL_ORDER = 16


class QuadratureError(RuntimeError):
    """Raised when an integral does not settle within the node budget."""

    def __init__(self, message, estimate, budget):
        super().__init__(f"{message} (best estimate {estimate!r}, budget {budget} nodes)")
        self.estimate = estimate
        self.budget = budget


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int

    def __len__(self):
        return self.nodes.size

    def apply(self, f):
        return f(self.nodes) @ self.weights


def total_mass(params: JacobiParams) -> float:
    """Integral of dmu_{alpha,beta} over [-1, 1]."""
    a, b = params.alpha, params.beta
    return exp((a + b + 1.0) * log(2.0) + lgamma(a + 1.0) + lgamma(b + 1.0) - lgamma(a + b + 2.0))


@lru_cache(maxsize=128)
def _rule(alpha, beta, k):
    if k == 1:
        nodes = np.array([(beta - alpha) / (alpha + beta + 2.0)])
    else:
        a, b = _coeff_arrays(alpha, beta, k)
        nodes = eigvalsh_tridiagonal(b[:k], a[1:k])
    # Christoffel numbers: 1 / sum_{j<k} p_j(x)^2
    weights = 1.0 / _backend.christoffel_sums(alpha, beta, k, nodes)
    # node error near a singular endpoint leaks into every weight; pin the mass
    weights *= total_mass(JacobiParams(alpha, beta)) / weights.sum()
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights, 2 * k - 1)


def gauss_jacobi_rule(params: JacobiParams, k: int) -> QuadratureRule:
    """k-point Gauss rule for dmu_{alpha,beta}, exact through degree 2k-1.

    Nodes are eigenvalues of the symmetric Jacobi matrix (Golub-Welsch);
    weights are reciprocal Christoffel sums, which stay accurate near the
    endpoints where eigenvector components lose relative precision.
    """
    if k < 1:
        raise ValueError(f"need at least one node, got {k}")
    rule = _rule(params.alpha, params.beta, int(k))
    if not (np.all(np.diff(rule.nodes) > 0) and rule.nodes[0] > -1 and rule.nodes[-1] < 1):
        raise QuadratureError("Golub-Welsch produced invalid nodes", float("nan"), k)
    return rule


def _left_rule(params, b, k):
    # [-1, b]: (1+x)^beta handled by the rule, (1-x)^alpha folded in
    base = gauss_jacobi_rule(JacobiParams(0.0, params.beta), k)
    h = (b + 1.0) / 2.0
    x = -1.0 + h * (base.nodes + 1.0)
    return x, base.weights * h ** (params.beta + 1.0) * (1.0 - x) ** params.alpha


def _right_rule(params, a, k):
    # [a, 1]: (1-x)^alpha handled by the rule, (1+x)^beta folded in
    base = gauss_jacobi_rule(JacobiParams(params.alpha, 0.0), k)
    h = (1.0 - a) / 2.0
    x = 1.0 - h * (1.0 - base.nodes)
    return x, base.weights * h ** (params.alpha + 1.0) * (1.0 + x) ** params.beta


def _full_rule(params, k):
    rule = gauss_jacobi_rule(params, k)
    return rule.nodes, rule.weights


def _interior_rule(params, a, b, panels):
    base = gauss_jacobi_rule(JacobiParams(0.0, 0.0), PANEL_ORDER)
    edges = np.linspace(a, b, panels + 1)
    half = np.diff(edges)[:, None] / 2.0
    x = (edges[:-1, None] + half * (base.nodes + 1.0)).ravel()
    w = (half * base.weights).ravel()
    return x, w * (1.0 - x) ** params.alpha * (1.0 + x) ** params.beta


def measure_rule(params: JacobiParams, a: float, b: float, size: int):
    """Nodes and weights (measure folded in) for one refinement level on [a, b].

    ``size`` is the node count for endpoint-touching intervals and the panel
    count for interior ones.
    """
    if a == -1.0 and b == 1.0:
        return _full_rule(params, size)
    if a == -1.0:
        return _left_rule(params, b, size)
    if b == 1.0:
        return _right_rule(params, a, size)
    return _interior_rule(params, a, b, size)


def integrate_measure(params: JacobiParams, f, a: float, b: float,
                      tol: float = DEFAULT_TOL, k0: int = 16,
                      budget: int = NODE_BUDGET, noise: float = 4e-16):
    """Integral of ``f`` against dmu_{alpha,beta} over [a, b].

    ``f`` maps an array of points to an array whose last axis runs over the
    points, so several integrands can share one rule. Refinement doubles the
    node (or panel) count until successive estimates agree to ``tol``, or to
    ``noise`` relative to the result when ``f`` itself carries rounding error
    larger than ``tol``.
    """
    if not -1.0 <= a <= b <= 1.0:
        raise ValueError(f"need -1 <= a <= b <= 1, got [{a}, {b}]")
    if a == b:
        probe = np.asarray(f(np.array([a])))
        return 0.0 if probe.ndim <= 1 else np.zeros(probe.shape[:-1])
    interior = a > -1.0 and b < 1.0
    if interior and min(a + 1.0, 1.0 - b) < b - a:
        # an endpoint singularity sits closer than the interval is long, which
        # uniform panels resolve badly; difference two endpoint-anchored rules
        args = (tol, k0, budget, noise)
        if 1.0 - b <= a + 1.0:
            return (integrate_measure(params, f, a, 1.0, *args)
                    - integrate_measure(params, f, b, 1.0, *args))
        return (integrate_measure(params, f, -1.0, b, *args)
                - integrate_measure(params, f, -1.0, a, *args))
    size = 1 if interior else max(int(k0), 1)
    nodes_of = (lambda s: s * PANEL_ORDER) if interior else (lambda s: s)
    x, w = measure_rule(params, a, b, size)
    prev = np.asarray(f(x)) @ w
    while True:
        size *= 2
        if nodes_of(size) > budget:
            raise QuadratureError(f"no convergence on [{a}, {b}]", prev, budget)
        x, w = measure_rule(params, a, b, size)
        cur = np.asarray(f(x)) @ w
        err = np.max(np.abs(cur - prev))
        if err <= max(tol, noise * np.max(np.abs(cur))):
            return cur if np.ndim(cur) else float(cur)
        prev = cur


def integrate_pieces(params, f, a, b, breakpoints=(), tol=DEFAULT_TOL):
    """Sum of :func:`integrate_measure` over [a, b] split at ``breakpoints``."""
    cuts = [a] + sorted(c for c in breakpoints if a < c < b) + [b]
    return sum(integrate_measure(params, f, lo, hi, tol) for lo, hi in zip(cuts, cuts[1:]))


def fourier_jacobi_coefficient(params: JacobiParams, F, n: int,
                               tol: float = DEFAULT_TOL, breakpoints=()) -> float:
    """c_n(F) = integral of F p_n dmu over [-1, 1].

    Pass the discontinuities of ``F`` as ``breakpoints`` so each one is a
    panel boundary rather than something the rule has to resolve.
    """
    def integrand(x):
        return F(x) * orthonormal_all(params, n, x)[n]
    return float(integrate_pieces(params, integrand, -1.0, 1.0, breakpoints, tol))
