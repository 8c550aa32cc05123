import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobimult.jacobi import JacobiParams
from jacobimult.kernel import (
    DiagonalCache,
    KernelSlice,
    diagonal,
    edge_weight_R,
    edge_weight_r,
    halfline_matrix,
    kernel_halfline,
    kernel_interval,
    kernel_quadrature,
    kernel_slice,
    truncated_edge_factor,
)

B_GRID = [-0.99, -0.5, 0.0, 0.5, 0.99]


class TestHalfline:
    def test_example(self, legendre):
        assert kernel_halfline(legendre, 0.0, 0, 1) == pytest.approx(-math.sqrt(3) / 4, abs=1e-15)

    @pytest.mark.parametrize("m,n", [(0, 0), (3, 3), (2, 7), (11, 4)])
    def test_endpoints(self, params, m, n):
        assert kernel_halfline(params, 1.0, m, n) == (1.0 if m == n else 0.0)
        assert kernel_halfline(params, -1.0, m, n) == 0.0

    def test_closed_form_against_quadrature(self, params):
        # oracle: direct quadrature of p_m p_n over [-1, b]
        for b in B_GRID:
            K = halfline_matrix(params, b, np.arange(31), 31)
            for m in range(31):
                for n in range(31):
                    if m != n:
                        assert abs(K[m, n] - kernel_quadrature(params, -1.0, b, m, n)) <= 1e-8

    def test_against_mpmath(self):
        # independent high-precision integral at a non-standard pair
        params = JacobiParams(-0.7, 2.2)
        mpmath.mp.dps = 30
        m, n, b = 3, 8, 0.35
        ref = mpmath.quad(lambda x: mpmath.jacobi(m, -0.7, 2.2, x) * mpmath.jacobi(n, -0.7, 2.2, x)
                          * (1 - x) ** mpmath.mpf(-0.7) * (1 + x) ** mpmath.mpf(2.2), [-1, b])
        from jacobimult.jacobi import normalization
        ref = float(ref) * normalization(params, m) * normalization(params, n)
        assert kernel_halfline(params, b, m, n) == pytest.approx(ref, rel=1e-11)

    @given(st.floats(-0.999, 0.999), st.integers(0, 300), st.integers(0, 300))
    @settings(max_examples=80, deadline=None)
    def test_symmetry_exact(self, b, m, n):
        params = JacobiParams(0.5, 1.3)
        assert kernel_halfline(params, b, m, n) == kernel_halfline(params, b, n, m)

    def test_decay(self, params):
        for b in (0.0, 0.9):
            K = halfline_matrix(params, b, np.arange(1001), 1001)
            d = np.abs(np.subtract.outer(np.arange(1001), np.arange(1001)))
            scaled = np.where(d > 0, np.abs(K) * d, 0.0)
            small, large = scaled[:501, :501].max(), scaled.max()
            assert np.isfinite(large)
            assert large < 1.05 * small


class TestDiagonal:
    def test_against_quadrature(self, params):
        for b in B_GRID:
            d = diagonal(params, b, 31)
            for n in (0, 5, 30):
                assert d[n] == pytest.approx(kernel_quadrature(params, -1.0, b, n, n), abs=1e-12)

    def test_bounds_and_monotone(self, params):
        bs = np.linspace(-1, 1, 41)
        D = np.array([diagonal(params, b, 300) for b in bs])
        assert np.all(D >= -1e-13) and np.all(D <= 1 + 1e-13)
        assert np.all(np.diff(D, axis=0) >= -1e-13)

    def test_legendre_p0(self, legendre):
        for b in (-0.3, 0.0, 0.8):
            assert diagonal(legendre, b, 1)[0] == pytest.approx((1 + b) / 2, abs=1e-15)

    def test_near_one(self, params):
        # integrating over the short side keeps b -> 1 accurate
        b = 1 - 1 / 256 ** 2
        d = diagonal(params, b, 257)
        assert d[256] == pytest.approx(kernel_quadrature(params, b, 1.0, 256, 256) * -1 + 1, abs=1e-12)

    def test_block_independence(self, legendre):
        a = diagonal(legendre, 0.37, 10, cache=DiagonalCache())
        b = diagonal(legendre, 0.37, 700, cache=DiagonalCache())
        assert np.array_equal(a, b[:10])

    def test_disk_cache(self, legendre, tmp_path):
        fresh = diagonal(legendre, -0.25, 300, cache=DiagonalCache(tmp_path))
        assert len(list(tmp_path.glob("*.npy"))) == 2
        cache = DiagonalCache(tmp_path)
        again = diagonal(legendre, -0.25, 300, cache=cache)
        assert cache.hits == 2 and cache.misses == 0
        assert np.array_equal(fresh, again)

    def test_cache_threads(self, legendre):
        from concurrent.futures import ThreadPoolExecutor
        cache = DiagonalCache()
        with ThreadPoolExecutor(4) as pool:
            rows = list(pool.map(lambda _: diagonal(legendre, 0.1, 500, cache=cache), range(8)))
        assert all(np.array_equal(rows[0], r) for r in rows)


def test_parseval_tail(legendre):
    K = halfline_matrix(legendre, 0.0, np.arange(11), 10 ** 4)
    for m in range(11):
        assert abs(np.sum(K[m] ** 2) - K[m, m]) < 1e-3


class TestInterval:
    def test_examples(self, legendre):
        assert kernel_interval(legendre, 0.0, 1.0, 0, 1) == pytest.approx(math.sqrt(3) / 4, abs=1e-15)
        for m, n in ((2, 2), (1, 4)):
            assert kernel_interval(legendre, -1, 1, m, n) == (1.0 if m == n else 0.0)
            assert kernel_interval(legendre, 0.3, 0.3, m, n) == 0.0

    def test_difference_of_halflines(self, params):
        a, b = -0.4, 0.65
        for m, n in ((0, 3), (5, 5), (9, 2)):
            assert kernel_interval(params, a, b, m, n) == pytest.approx(
                kernel_quadrature(params, a, b, m, n), abs=1e-11)

    def test_bad_interval(self, legendre):
        with pytest.raises(ValueError):
            kernel_interval(legendre, 0.5, 0.1, 0, 1)


class TestEdgeWeights:
    def test_examples(self, legendre):
        assert edge_weight_r(legendre, 0.0, 0) == pytest.approx(1 / math.sqrt(2), rel=1e-15)
        assert edge_weight_r(legendre, 0.0, 1) == 0.0
        assert edge_weight_R(legendre, 0.0, 0) == 0.0
        assert edge_weight_R(legendre, 0.0, 1) == pytest.approx(math.sqrt(1.5) / 3, rel=1e-15)

    def test_chebyshev_zero_index(self):
        # 2n + alpha + beta + 1 vanishes at n = 0 here
        p = JacobiParams(-0.5, -0.5)
        assert edge_weight_R(p, 0.3, np.arange(5))[0] == 0.0

    def test_bounded(self, params):
        n = np.arange(501)
        bs = np.concatenate([np.linspace(-0.999, 0.999, 81), [1 - 1e-6, -1 + 1e-6]])
        r = np.array([np.abs(edge_weight_r(params, b, n)) for b in bs])
        R = np.array([np.abs(edge_weight_R(params, b, n)) for b in bs])
        for table in (r, R):
            first, second = table[:, :251].max(), table[:, 250:].max()
            assert np.isfinite(second)
            assert second <= 1.1 * first

    def test_recovers_kernel(self, params):
        # K_b(m,n) = [r(n) R(m) (2m+s) - R(n) r(m) (2n+s)] / (lambda_n - lambda_m)
        b, s = 0.42, params.s
        n = np.arange(12)
        r, R = edge_weight_r(params, b, n), edge_weight_R(params, b, n)
        K = halfline_matrix(params, b, n, 12)
        for m in range(12):
            for k in range(12):
                if m != k:
                    val = (r[k] * R[m] * (2 * m + s) - R[k] * r[m] * (2 * k + s)) / ((k - m) * (k + m + s))
                    assert val == pytest.approx(K[m, k], abs=1e-13)


class TestTruncatedEdgeFactor:
    def test_trivial_exponents(self):
        assert truncated_edge_factor(0, 0, 0.3, 7) == 1.0

    @given(st.floats(0, 3), st.floats(0, 3), st.floats(0, 3), st.floats(0, 3),
           st.floats(-0.999, 0.999), st.integers(0, 1000))
    def test_product_law(self, r1, s1, r2, s2, b, n):
        lhs = truncated_edge_factor(r1, s1, b, n) * truncated_edge_factor(r2, s2, b, n)
        assert lhs == pytest.approx(truncated_edge_factor(r1 + r2, s1 + s2, b, n), rel=1e-12)

    def test_bounded_by_one(self, params):
        b = np.linspace(-0.999, 0.999, 101)[:, None]
        n = np.arange(400)[None, :]
        M = truncated_edge_factor(params.alpha + 1, params.beta + 1, b, n)
        assert np.all(M > 0) and np.all(M <= 1)

    def test_negative_exponent(self):
        with pytest.raises(ValueError):
            truncated_edge_factor(-1, 0, 0.0, 3)


def test_slice_csv(legendre):
    ks = kernel_slice(legendre, -1.0, 0.0, 0, 4)
    text = ks.to_csv()
    lines = text.splitlines()
    assert lines[0] == "# alpha=0.0 beta=0.0 a=-1.0 b=0.0 m=0 N=4"
    assert lines[1] == "n,value"
    assert float(lines[3].split(",")[1]) == pytest.approx(-math.sqrt(3) / 4)
    assert ks.trunc == 4
    assert ks.decay_constant == pytest.approx(max(abs(ks.values[n]) * n for n in range(1, 4)))
    assert isinstance(ks, KernelSlice)
