"""Cauchy transforms, the entire function g and the parametrization."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import pytest

from nevlab import Const, ContourError, DomainError, GDelta, IsmailValent, MeasureSpec, NearAxisError
from nevlab.transforms import (
    GEvaluator,
    adbc_residual,
    asymptotic_moment_diagnostic,
    cauchy_transform,
    fg_residual,
    g_contour,
    g_bar_eval,
    g_eval,
    parametrization_residual,
    side_limit_gap,
    split_ac,
    stieltjes_inversion_check,
)

# -f(-i) int mu(x; i)/(x + i) dx at k = 1/sqrt(2), mpmath quadrature of the closed form.
G_MINUS_I = 1.03051224274870918868j
# int mu(x; 2i)/(x - 1 - i) dx at k = 1/sqrt(2), same oracle.
C_2I_AT_1_PLUS_I = -0.06759954463882076658 + 0.32827918442197315722j


@pytest.fixture(scope="module")
def ge(iv):
    return GEvaluator(iv)


@pytest.fixture(scope="module")
def ge_t(tilde):
    return GEvaluator(tilde)


@dataclass(frozen=True, eq=False)
class _NearRealZero(IsmailValent):
    # Pretends f has a zero just above 0, so no contour radius is admissible there.
    def known_zeros(self, n_max):
        return [0.004j]


class TestG:
    def test_lower_half_plane_value(self, ge):
        assert abs(g_eval(ge, -1j) - G_MINUS_I) < 1e-13

    def test_contour_matches_lower_formula(self, ge):
        assert abs(g_contour(ge, -1j, radius=4.0) - G_MINUS_I) < 1e-13

    @pytest.mark.parametrize("z", [0.5 + 0.01j, -3 + 0.05j, 2 - 0.02j])
    def test_contour_matches_formulas_off_strip(self, ge, ge_t, z):
        for g in (ge, ge_t):
            assert abs(g_contour(g, z) - g_eval(g, z)) < 1e-12 * max(1.0, abs(g_eval(g, z)))

    def test_c_at_origin(self, ge):
        a, c = split_ac(ge, 0j)
        assert abs(c + math.sqrt(math.pi) / 2) < 1e-13
        assert abs(a) < 1e-13

    def test_continuity_across_axis(self, ge):
        # one-sided values approach each other at a rate set by |g'|
        gap = abs(g_eval(ge, 0.5 + 1e-7j) - g_eval(ge, 0.5 - 1e-7j))
        assert gap < 1e-6

    @pytest.mark.parametrize("x", [-10.0, -1.0, 0.0, 0.5, 7.5])
    def test_side_limit_gap(self, ge, ge_t, x):
        assert side_limit_gap(ge, x) < 1e-6
        assert side_limit_gap(ge_t, x) < 1e-6

    def test_tilde_contour_avoids_zero(self, ge_t):
        # the zero of f~ at 0.546i forces the radius down to 0.5
        assert fg_residual(ge_t, 0.0) < 1e-12

    def test_contour_error(self, pair):
        g = GEvaluator(_NearRealZero(pair))
        with pytest.raises(ContourError):
            g_contour(g, 0.0)

    @pytest.mark.parametrize("z", [1 + 1j, -2 + 0.3j, 0.5 + 0.01j])
    def test_g_bar_against_direct_quadrature(self, ge, ge_t, z):
        # g_bar is taken as conj g(conj z); independently, g_bar = -f_bar * I for Im z > 0
        for g in (ge, ge_t):
            direct = -g.f.f_bar(z) * g.C(z)
            assert abs(g_bar_eval(g, z) - direct) < 1e-12 * max(1.0, abs(direct))

    @pytest.mark.parametrize("z", [1 + 1j, -3 + 0.02j])
    def test_transform_symmetry(self, ge, z):
        assert abs(ge.C(z.conjugate()) - ge.C(z).conjugate()) < 1e-15

    def test_strip_rejected_by_transform(self, ge):
        with pytest.raises(NearAxisError):
            cauchy_transform(ge.base, 1 + 1e-5j)

    def test_bad_strip(self, iv):
        with pytest.raises(DomainError):
            GEvaluator(iv, strip_half_width=0.5)


class TestIdentities:
    @pytest.mark.parametrize("z", [0j, 1.5 + 0j, -4 + 0.0005j, 2 - 1.5j, -3 + 2j])
    def test_adbc(self, ge, ge_t, z):
        assert adbc_residual(ge, z) < 1e-10
        assert adbc_residual(ge_t, z) < 1e-10

    @pytest.mark.parametrize("z", [0.25 + 0j, -2 - 0.0002j, 4 + 1j])
    def test_fg(self, ge, ge_t, z):
        assert fg_residual(ge, z) < 1e-10
        assert fg_residual(ge_t, z) < 1e-10


class TestParametrization:
    def test_transform_against_oracle(self, iv):
        val = cauchy_transform(MeasureSpec.build(iv, Const(0.0, 2.0)), 1 + 1j)
        assert abs(val - C_2I_AT_1_PLUS_I) < 1e-14

    @pytest.mark.parametrize("phi", [Const(0.0, 2.0), Const(1.0, 1.0), GDelta(1.0)])
    def test_residual(self, ge_t, phi):
        pr = parametrization_residual(ge_t, phi, 0.5 + 0.1j)
        assert pr.residual < 1e-10 and pr.form_gap < 1e-12

    def test_not_tautological(self, ge):
        # transform for 3i against the right-hand side for 2i must disagree
        lhs = parametrization_residual(ge, Const(0.0, 3.0), 1 + 1j).lhs
        rhs = parametrization_residual(ge, Const(0.0, 2.0), 1 + 1j).rhs
        assert abs(lhs - rhs) > 1e-3

    def test_needs_upper_point(self, ge):
        with pytest.raises(DomainError):
            parametrization_residual(ge, GDelta(1.0), 1 - 1j)


class TestDiagnostics:
    def test_stieltjes_errors_shrink(self, iv):
        errs = stieltjes_inversion_check(MeasureSpec.build(iv, Const(0.0, 1.0)), 0.0, (0.1, 0.05, 0.025))
        assert errs[0] > errs[1] > errs[2] and errs[2] < 0.5 * errs[0]
        # mpmath: |(1/pi) Im I(0.1i) - mu(0)| = 0.01649393355389991196
        assert errs[0] == pytest.approx(0.01649393355389991196, rel=1e-12)

    def test_stieltjes_eps_order(self, iv):
        with pytest.raises(DomainError):
            stieltjes_inversion_check(MeasureSpec.build(iv, Const(0.0, 1.0)), 0.0, (0.01, 0.1))

    @pytest.mark.parametrize("which", ["ge", "ge_t"])
    def test_asymptotic_decay_2i(self, request, which):
        vals = asymptotic_moment_diagnostic(request.getfixturevalue(which), Const(0.0, 2.0), (10, 30, 100))
        assert vals[0] > vals[1] > vals[2]

    def test_asymptotic_zero_for_i(self, ge):
        assert asymptotic_moment_diagnostic(ge, Const(0.0, 1.0), (10, 30)) == [0.0, 0.0]

    def test_asymptotic_decay(self, ge):
        vals = asymptotic_moment_diagnostic(ge, GDelta(1.0), (10, 20, 40, 80))
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert np.isfinite(vals).all()
