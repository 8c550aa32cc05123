import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy.special import eval_jacobi, roots_jacobi

from jacobimult.jacobi import (
    AMPLITUDE,
    JacobiParams,
    asymptotic_approx,
    eigenvalue,
    envelope_bound,
    jacobi_unnormalized,
    normalization,
    orthonormal,
    orthonormal_all,
    orthonormal_derivative,
    orthonormal_derivative_all,
    phase,
)

exponents = st.floats(min_value=-0.95, max_value=3.0, allow_nan=False)
points = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


class TestParams:
    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError, match="alpha"):
            JacobiParams(-1.0, 0.0)
        with pytest.raises(ValueError):
            JacobiParams(0.0, -1.5)

    def test_standard_range(self):
        assert JacobiParams(-0.5, -0.5).standard_range
        assert not JacobiParams(-0.6, 0.0).standard_range


class TestUnnormalized:
    def test_examples(self, legendre):
        assert jacobi_unnormalized(legendre, 0, 0.3) == 1.0
        assert jacobi_unnormalized(legendre, 2, 1.0) == 1.0
        assert jacobi_unnormalized(legendre, 1, 0.5) == 0.5

    def test_degree_one_formula(self):
        p = JacobiParams(0.7, -0.2)
        x = 0.37
        assert jacobi_unnormalized(p, 1, x) == pytest.approx((p.alpha + p.beta + 2) * x / 2
                                                             + (p.alpha - p.beta) / 2)

    @pytest.mark.parametrize("n", [2, 5, 13, 30])
    @pytest.mark.parametrize("x", [-0.93, -0.2, 0.41, 0.999])
    def test_against_mpmath(self, params, n, x):
        exact = float(mpmath.jacobi(n, params.alpha, params.beta, x))
        assert jacobi_unnormalized(params, n, x) == pytest.approx(exact, rel=1e-11, abs=1e-12)

    def test_value_at_one_is_binomial(self, params):
        for n in range(31):
            binom = math.gamma(n + params.alpha + 1) / (math.gamma(n + 1) * math.gamma(params.alpha + 1))
            assert jacobi_unnormalized(params, n, 1.0) == pytest.approx(binom, rel=1e-10)

    def test_domain(self, legendre):
        with pytest.raises(ValueError):
            jacobi_unnormalized(legendre, 3, 1.01)
        with pytest.raises(ValueError):
            jacobi_unnormalized(legendre, -1, 0.0)


class TestNormalization:
    def test_examples(self, legendre):
        assert normalization(legendre, 0) == pytest.approx(0.7071067811865476, rel=1e-15)
        assert normalization(legendre, 1) == pytest.approx(1.224744871391589, rel=1e-15)

    @given(exponents, exponents, st.integers(0, 200))
    def test_symmetric_in_exponents(self, a, b, n):
        assert normalization(JacobiParams(a, b), n) == pytest.approx(
            normalization(JacobiParams(b, a), n), rel=1e-13)

    @pytest.mark.parametrize("n", [0, 1, 4, 17, 60])
    def test_against_direct_norm(self, params, n):
        # 1 / sqrt(int P_n^2 dmu), with scipy's own P_n and Gauss rule (exact here)
        x, w = roots_jacobi(n + 5, params.alpha, params.beta)
        sq = np.sum(eval_jacobi(n, params.alpha, params.beta, x) ** 2 * w)
        assert normalization(params, n) == pytest.approx(1 / math.sqrt(sq), rel=1e-11)

    def test_large_degree_finite(self, params):
        w = normalization(params, 10 ** 6)
        assert math.isfinite(w) and w > 0
        # w_n ~ sqrt(n) / 2^((alpha+beta)/2)
        assert w / math.sqrt(10 ** 6) == pytest.approx(2 ** (-(params.alpha + params.beta) / 2), rel=1e-3)


class TestOrthonormal:
    def test_examples(self, legendre):
        assert orthonormal(legendre, 0, 0.123) == pytest.approx(0.7071067811865476, rel=1e-15)
        assert orthonormal(legendre, 1, 0.0) == 0.0
        assert orthonormal(legendre, 1, 1.0) == pytest.approx(math.sqrt(1.5), rel=1e-15)

    def test_batch_matches_scalar(self, params):
        xs = np.linspace(-1, 1, 23)
        table = orthonormal_all(params, 40, xs)
        for n in (0, 1, 2, 7, 40):
            expected = [orthonormal(params, n, x) for x in xs]
            assert_allclose(table[n], expected, rtol=1e-11, atol=1e-12)

    def test_orthonormality_independent_rule(self, params):
        x, w = roots_jacobi(60, params.alpha, params.beta)
        P = orthonormal_all(params, 40, x)
        assert_allclose(P * w @ P.T, np.eye(41), atol=1e-9)

    @given(exponents, exponents, st.integers(0, 40), points)
    @settings(max_examples=60)
    def test_reflection(self, a, b, n, x):
        lhs = orthonormal_all(JacobiParams(a, b), n, -x)[n]
        rhs = (-1) ** n * orthonormal_all(JacobiParams(b, a), n, x)[n]
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10)


class TestDerivative:
    def test_examples(self, legendre):
        assert orthonormal_derivative(legendre, 0, 0.7) == 0.0
        for x in (-0.8, 0.0, 0.55):
            assert orthonormal_derivative(legendre, 1, x) == pytest.approx(math.sqrt(1.5), rel=1e-15)
        assert orthonormal_derivative(legendre, 2, 0.0) == 0.0

    @pytest.mark.parametrize("n", range(0, 21, 4))
    def test_central_differences(self, params, n):
        # five-point stencil: the three-point truncation error alone is ~1e-6 at n = 20
        h = 1e-5
        for x in np.linspace(-0.9, 0.9, 13):
            f = [orthonormal(params, n, x + k * h) for k in (-2, -1, 1, 2)]
            fd = (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * h)
            assert abs(orthonormal_derivative(params, n, x) - fd) <= 1e-6

    @pytest.mark.parametrize("n", [1, 6, 20])
    def test_against_mpmath_derivative(self, params, n):
        a, b = params.alpha, params.beta
        w = normalization(params, n)
        for x in (-0.9, -0.3, 0.25, 0.9):
            exact = w * float(mpmath.diff(lambda t: mpmath.jacobi(n, a, b, t), x))
            assert orthonormal_derivative(params, n, x) == pytest.approx(exact, rel=1e-10)

    def test_batch_matches_scalar(self, params):
        xs = np.linspace(-1, 1, 17)
        table = orthonormal_derivative_all(params, 30, xs)
        for n in (0, 1, 3, 30):
            expected = [orthonormal_derivative(params, n, x) for x in xs]
            assert_allclose(table[n], expected, rtol=1e-10, atol=1e-10)


def test_eigenvalue(legendre):
    assert eigenvalue(JacobiParams(0.3, 1.1), 0) == 0
    assert eigenvalue(legendre, 3) == 12
    assert eigenvalue(JacobiParams(-0.5, -0.5), 1) == 1
    lam = [eigenvalue(JacobiParams(0.3, 1.1), n) for n in range(50)]
    assert np.all(np.diff(lam) > 0)


class TestEnvelope:
    def test_examples(self, legendre):
        assert envelope_bound(legendre, 0, 0.0) == 1.0
        assert envelope_bound(legendre, 3, 1.0) == 2.0

    def test_domain(self, legendre):
        with pytest.raises(ValueError):
            envelope_bound(legendre, 3, -1.2)

    def test_ratio_stable_in_degree(self, params):
        x = np.concatenate([np.linspace(-1, 1, 2001), 1 - np.logspace(-7, -1, 120),
                            -1 + np.logspace(-7, -1, 120)])
        P = np.abs(orthonormal_all(params, 200, x))
        ratio = np.array([[P[n, j] / envelope_bound(params, n, xj) for j, xj in enumerate(x)]
                          for n in range(201)]).max(axis=1)
        low, high = ratio[50:101].max(), ratio[100:201].max()
        assert np.isfinite(high)
        assert abs(high - low) <= 0.1 * low


class TestAsymptotic:
    def test_constants(self):
        assert phase(JacobiParams(0, 0)) == pytest.approx(math.pi / 4)
        assert AMPLITUDE == pytest.approx(0.7978845608, abs=1e-10)

    def test_error_at_100(self, legendre):
        n = 100
        thetas = np.linspace(0.1, math.pi / 2, 200)
        exact = math.sqrt(2) * orthonormal_all(legendre, n, np.cos(thetas))[n]
        approx = np.array([asymptotic_approx(legendre, n, t) for t in thetas])
        # error is O(1/N); the constant observed on this grid is about 20
        assert np.max(np.abs(approx - exact)) * (n + 0.5) < 25

    def test_error_halves(self, params):
        thetas = np.linspace(0.1, math.pi / 2, 600)
        errs = []
        for n in (64, 128, 256):
            exact = 2 ** (params.s / 2) * orthonormal_all(params, n, np.cos(thetas))[n]
            approx = np.array([asymptotic_approx(params, n, t) for t in thetas])
            errs.append(np.max(np.abs(approx - exact)))
        ratios = np.array(errs[1:]) / np.array(errs[:-1])
        assert np.all((ratios >= 0.3) & (ratios <= 0.7))

    def test_domain(self, legendre):
        with pytest.raises(ValueError):
            asymptotic_approx(legendre, 10, 2.0)
        with pytest.raises(ValueError):
            asymptotic_approx(legendre, 10, 0.05)
