"""Complete elliptic integrals: AGM against the hypergeometric series and mpmath values."""

from __future__ import annotations

import math

import numpy as np
import pytest

from nevlab import ConvergenceError, DomainError, elliptic_K, elliptic_pair, hyp2f1_half_series

# K(k) from mpmath.ellipk(k**2) at 30 digits.
MPMATH_K = {
    0.1: 1.5747455615173559527,
    0.3: 1.6080486199305128013,
    0.5: 1.6857503548125960429,
    0.7071067811865476: 1.854074677301372009,
    0.9: 2.2805491384227702046,
}


class TestEllipticK:
    @pytest.mark.parametrize("k, expected", sorted(MPMATH_K.items()))
    def test_against_mpmath(self, k, expected):
        assert abs(elliptic_K(k) - expected) / expected < 1e-14

    def test_small_modulus_limit(self):
        assert abs(elliptic_K(1e-9) - math.pi / 2) < 1e-15

    @pytest.mark.parametrize("k", [0.1, 0.3, 0.5, 0.7071067811865476, 0.9, 0.99])
    def test_series_oracle(self, k):
        series = math.pi / 2 * hyp2f1_half_series(k * k, 1e-17)
        assert abs(elliptic_K(k) - series) / series < 1e-14

    def test_strictly_increasing(self):
        ks = np.linspace(0.01, 0.99, 60)
        vals = [elliptic_K(k) for k in ks]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    @pytest.mark.parametrize("k", [0.0, 1.0, -0.3, 1.2, float("nan")])
    def test_domain(self, k):
        with pytest.raises(DomainError):
            elliptic_K(k)


class TestEllipticPair:
    def test_symmetric_modulus(self):
        p = elliptic_pair(1 / math.sqrt(2))
        assert abs(p.K - p.Kp) < 1e-15
        assert abs(p.K - 1.8540746773013719) < 1e-15

    def test_half(self):
        p = elliptic_pair(0.5)
        assert abs(p.K - 1.6857503548125960) < 1e-15
        assert abs(p.Kp - 2.1565156474996432) < 1e-14

    def test_swap(self):
        p, q = elliptic_pair(0.5), elliptic_pair(math.sqrt(0.75))
        assert p.Kp == q.K and p.K == q.Kp
        s = p.swapped()
        assert abs(s.k - q.k) < 1e-16 and s.K == q.K

    def test_complementary_modulus(self):
        p = elliptic_pair(0.3)
        assert abs(p.kp - math.sqrt(1 - 0.09)) < 1e-16

    def test_domain(self):
        with pytest.raises(DomainError):
            elliptic_pair(1.2)


class TestHypergeometricSeries:
    def test_zero_argument(self):
        assert hyp2f1_half_series(0.0, 1e-16) == 1.0

    def test_half(self):
        # 2F1(1/2,1/2;1;1/2) = 2 K(1/sqrt 2) / pi
        assert abs(hyp2f1_half_series(0.5, 1e-17) - 2 * 1.854074677301372009 / math.pi) < 1e-15

    def test_nonconvergence(self):
        with pytest.raises(ConvergenceError):
            hyp2f1_half_series(0.999999999, 1e-17)

    @pytest.mark.parametrize("k2, tol", [(-0.1, 1e-10), (1.0, 1e-10), (0.5, 0.0)])
    def test_domain(self, k2, tol):
        with pytest.raises(DomainError):
            hyp2f1_half_series(k2, tol)
