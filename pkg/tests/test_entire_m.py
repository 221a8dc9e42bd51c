"""Class M entries: evaluation, conjugates, zeros and the membership check."""

from __future__ import annotations

import math
import warnings

import mpmath
import numpy as np
import pytest

from nevlab import DomainError, EvaluationRangeError, IsmailValent, TildeIV, ZeroProduct, elliptic_pair
from nevlab.entire import (
    check_membership,
    count_zeros_in_disk,
    count_zeros_lower_half_disk,
    entire_from_config,
    split_bd,
    zeros_iv,
)

# (2/sqrt(pi)) cos(sqrt(z)(K - iK')/2) evaluated by mpmath at 30 digits, k = 1/sqrt(2).
MPMATH_F = [
    (1 + 1j, 0.173609476057716756 + 0.707830680475330973j),
    (-2 + 0.5j, 0.171698420624122402 - 1.61365216025850991j),
    (3 - 1j, 0.788359343599267421 + 3.57587564395859034j),
]


class TestIsmailValent:
    @pytest.mark.parametrize("z, expected", MPMATH_F)
    def test_values(self, iv, z, expected):
        assert abs(iv.f(z) - expected) < 1e-15 * abs(expected) + 1e-16

    def test_other_modulus(self):
        f = IsmailValent(elliptic_pair(0.5))
        assert abs(f.f(1 + 1j) - (0.23171286966718522 + 0.991867014054139429j)) < 1e-15

    def test_origin(self, iv):
        assert iv.f(0.0) == pytest.approx(2 / math.sqrt(math.pi), rel=1e-16)
        b, d = iv.bd(0.0)
        assert b == pytest.approx(2 / math.sqrt(math.pi)) and abs(d) < 1e-300

    def test_bd_real_on_axis(self, iv):
        x = np.linspace(-50, 50, 101)
        b, d = iv.bd(x)
        assert np.max(np.abs(b.imag)) < 1e-12 * np.max(np.abs(b))
        assert np.max(np.abs(d.imag)) < 1e-12 * np.max(np.abs(d))

    def test_f_equals_b_minus_id(self, iv):
        z = np.array([0.3 + 2j, -4 - 1j, 7 + 0.1j])
        b, d = split_bd(iv, z)
        assert np.allclose(b - 1j * d, iv.f(z), rtol=1e-14, atol=0)

    def test_conjugate(self, iv):
        z = 2.5 - 1.5j
        assert abs(iv.f_bar(z) - np.conj(iv.f(np.conj(z)))) == 0

    def test_mpmath_path_matches(self, iv):
        with mpmath.workdps(30):
            for z in (1 + 1j, -3.5 + 0j, 12.25 + 0j):
                v = complex(iv.f_mp(mpmath.mpc(z)))
                assert abs(v - iv.f(z)) < 1e-14 * abs(v)

    def test_known_zeros(self, pair, iv):
        zs = zeros_iv(pair, 3)
        assert zs[0] == pytest.approx(1.4355400220922603j, rel=1e-14)
        for z in zs:
            assert z.imag > 0
            assert abs(iv.f(z)) < 1e-10 * max(1.0, abs(z))

    def test_no_zeros_in_lower_half_disk(self, iv):
        assert count_zeros_lower_half_disk(iv, 50.0) == 0

    def test_radius_guard(self, iv):
        with pytest.raises(EvaluationRangeError):
            iv.f(1e12 + 0j)


class TestTildeIV:
    def test_definition(self, iv, tilde):
        z = np.array([0.5 + 0.5j, -2 + 1j, 4 - 3j])
        b, _ = iv.bd(z)
        assert np.allclose(tilde.f(z), iv.f(z) + 1j * z * b, rtol=1e-14)

    def test_b_preserved_and_d_shifted(self, iv, tilde):
        x = np.linspace(-20, 20, 41)
        b, d = iv.bd(x)
        bt, dt = tilde.bd(x)
        assert np.allclose(bt, b, rtol=1e-13, atol=1e-13)
        assert np.allclose(dt, d - x * b, rtol=1e-12, atol=1e-12)

    def test_zero_near_imaginary_axis(self, tilde):
        # the first zero sits at about 0.546157i
        assert count_zeros_in_disk(tilde, 0.546157j, 0.05) == 1
        assert abs(tilde.f(0.546157j)) < 1e-5

    def test_no_zeros_in_lower_half_disk(self, tilde):
        assert count_zeros_lower_half_disk(tilde, 50.0) == 0

    def test_features_are_dips(self, tilde):
        for c, w in tilde.real_features(12.0):
            x = math.copysign(c * c, c)
            near = abs(tilde.f(x))
            away = abs(tilde.f(math.copysign((abs(c) + 10 * w) ** 2, c)))
            assert near < away


class TestZeroProduct:
    def test_evaluation(self):
        f = ZeroProduct(2.0, (1j, 2 + 3j))
        z = 0.7 - 0.2j
        assert f.f(z) == pytest.approx(2 * (1 - z / 1j) * (1 - z / (2 + 3j)), rel=1e-15)

    def test_origin_zero_rejected(self):
        with pytest.raises(DomainError):
            ZeroProduct(1.0, (0j,))

    def test_mp_path(self):
        f = ZeroProduct(1 + 0.5j, (1j, -1 + 2j))
        assert abs(complex(f.f_mp(mpmath.mpc(0.3, 0.4))) - f.f(0.3 + 0.4j)) < 1e-15


class TestMembership:
    def test_iv_passes(self, iv):
        rep = check_membership(iv)
        assert rep.zeros_ok and rep.verdict == "pass"

    def test_tilde_passes(self, tilde):
        assert check_membership(tilde).verdict == "pass"

    def test_lower_zero_fails(self):
        f = ZeroProduct(1.0, (1j, 1 - 2j))
        rep = check_membership(f)
        assert not rep.zeros_ok and rep.verdict == "fail"

    def test_finite_product_inconclusive(self):
        with warnings.catch_warnings(record=True):
            warnings.simplefilter("always")
            rep = check_membership(ZeroProduct(1.0, (1j, 2j)))
        assert rep.zeros_ok and rep.verdict == "inconclusive"

    def test_bad_radii(self, iv):
        with pytest.raises(DomainError):
            check_membership(iv, radii=(1e3, 1e2))


class TestConfig:
    def test_models(self):
        assert isinstance(entire_from_config({"model": "iv", "k": 0.5}), IsmailValent)
        assert isinstance(entire_from_config({"model": "iv-tilde", "k": 0.5}), TildeIV)
        f = entire_from_config({"model": "zero-product", "C": [1, 0], "zeros": [[0, 1]]})
        assert f.zeros == (1j,)

    @pytest.mark.parametrize("cfg", [{"model": "nope"}, {"model": "iv"}, {"model": "zero-product", "zeros": [1]},
                                     {"model": "iv", "k": 1.5}])
    def test_rejects(self, cfg):
        with pytest.raises(DomainError):
            entire_from_config(cfg)
