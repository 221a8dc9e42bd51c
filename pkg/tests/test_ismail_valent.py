"""Closed forms of the worked example and the Case I / Case II study."""

from __future__ import annotations

import math

import numpy as np
import pytest

from nevlab import IsmailValent, PickFn, TildeIV, elliptic_pair
from nevlab.errors import DomainError
from nevlab.ismail_valent import (
    CASE_ABSCISSAE,
    case2_residual,
    case_study,
    iv_BD,
    iv_bd_closed,
    iv_density_closed,
    nu_via_BD,
    phi_tilde,
)
from nevlab.measures import base_density

S = 2 / math.sqrt(math.pi)


class TestClosedForms:
    def test_origin(self, pair):
        b, d = iv_bd_closed(pair, 0.0)
        assert b == pytest.approx(S, rel=1e-16) and d == 0.0
        assert iv_density_closed(pair, 0.0) == 0.25

    def test_negative_density(self, pair):
        # mpmath: 1/(2 (cosh 2K + cos 2K)) = 0.02556545336833335468
        assert iv_density_closed(pair, -4.0) == pytest.approx(0.02556545336833335468, rel=1e-14)

    @pytest.mark.parametrize("k", [0.5, 1 / math.sqrt(2), 0.8])
    def test_bd_match_generic(self, k):
        p = elliptic_pair(k)
        x = np.linspace(-40, 40, 161)
        b, d = iv_bd_closed(p, x)
        gb, gd = IsmailValent(p).bd(x)
        scale = np.maximum(1.0, np.abs(gb))
        assert np.max(np.abs(b - gb.real) / scale) < 1e-13
        assert np.max(np.abs(d - gd.real) / np.maximum(1.0, np.abs(gd))) < 1e-13

    @pytest.mark.parametrize("k", [0.5, 0.8])
    def test_density_match_generic(self, k):
        p = elliptic_pair(k)
        x = np.linspace(-40, 40, 161)
        assert np.allclose(iv_density_closed(p, x), base_density(IsmailValent(p), x), rtol=1e-12, atol=0)

    def test_BD_values(self):
        # mpmath: B(1) = 0.75172764620430971678, D(1) = -1.23541192792304877801 at k = 0.5
        B, D = iv_BD(elliptic_pair(0.5), 1.0)
        assert B == pytest.approx(0.75172764620430971678, rel=1e-14)
        assert D == pytest.approx(-1.23541192792304877801, rel=1e-14)

    def test_BD_origin(self, pair):
        assert iv_BD(pair, 0.0) == (pytest.approx(1.0, rel=1e-16), 0.0)

    def test_nu_at_origin(self, pair):
        assert nu_via_BD(pair, phi_tilde(), 0.0) == pytest.approx(0.25, rel=1e-15)

    def test_nu_needs_upper_values(self, pair):
        class RealOnAxis(PickFn):
            def _eval(self, z):
                return z

        with pytest.raises(DomainError):
            nu_via_BD(pair, RealOnAxis(), 0.0)


class TestCaseStudy:
    def test_symmetric_modulus(self, pair):
        rep = case_study(pair)
        assert rep.verdict == "pass"
        assert [x for x, _ in rep.pointwise_residuals] == list(CASE_ABSCISSAE)
        assert max(r for _, r in rep.pointwise_residuals) < 1e-10
        assert all(row[3] <= bud for row, bud in zip(rep.moment_match, rep.moment_budgets))
        assert rep.case2_residual > 1e-2
        assert rep.notes == ""

    def test_nu_equals_tilde_density(self, pair):
        x = np.linspace(-8, 8, 33)
        assert np.allclose(nu_via_BD(pair, phi_tilde(), x), base_density(TildeIV(pair), x), rtol=1e-12)

    def test_asymmetric_modulus_notes(self, pair_half):
        rep = case_study(pair_half)
        assert rep.verdict == "pass"
        assert "log(k/k')" in rep.notes
        assert max(r for _, r in rep.pointwise_residuals) > 1e-3

    @pytest.mark.parametrize("k", [0.5, 1 / math.sqrt(2), 0.8])
    def test_D_outside_tilde_span(self, k):
        p = elliptic_pair(k)
        assert case2_residual(p) > 1e-2
        assert case2_residual(p, np.linspace(-10, 10, 1601)) > 1e-2

    def test_span_detects_members(self, pair):
        # a genuine combination of b~, d~ must give a vanishing residual
        x = np.linspace(-10, 10, 401)
        b, d = iv_bd_closed(pair, x)
        A = np.column_stack([b, d - x * b])
        target = 0.3 * b - 2.0 * (d - x * b)
        coef, *_ = np.linalg.lstsq(A, target, rcond=None)
        assert np.linalg.norm(A @ coef - target) < 1e-10 * np.linalg.norm(target)

    def test_to_dict_keys(self, pair):
        keys = list(case_study(pair).to_dict())
        assert keys[0] == "k" and "verdict" in keys and "notes" in keys
