"""Pick functions, the w-transform, P_b certificates and the text grammar."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nevlab import CertificateError, Const, DomainError, GDelta, LinearTilde, Moebius, ShiftCompose, parse_pick
from nevlab.errors import PoleError
from nevlab.pick import PickSyntaxError, from_w, g_delta_map, to_w, w_bound


def _upper_grid():
    xs = np.concatenate([-np.logspace(-3, 5, 40)[::-1], [0.0], np.logspace(-3, 5, 40)])
    ys = np.concatenate([[0.0], np.logspace(-3, 5, 30)])
    return (xs[None, :] + 1j * ys[:, None]).ravel()


class TestWTransform:
    def test_i_maps_to_zero(self):
        assert to_w(Const(0.0, 1.0), 0.3 + 0.2j) == 0

    def test_2i(self):
        assert to_w(Const(0.0, 2.0), 0.0) == pytest.approx(-1 / 3, abs=1e-16)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(-1e3, 1e3), st.floats(1e-3, 1e3))
    def test_round_trip(self, t, gamma):
        phi = Const(t, gamma)
        w = to_w(phi, 0.0)
        assert abs(w) < 1
        back = from_w(w)
        assert abs(back - phi.value) <= 1e-9 * max(1.0, abs(phi.value)) ** 2

    @settings(max_examples=100, deadline=None)
    @given(st.complex_numbers(max_magnitude=0.999, allow_nan=False, allow_infinity=False))
    def test_disk_round_trip(self, w):
        phi = from_w(w)
        assert phi.imag >= -1e-12
        assert abs((1 + 1j * phi) / (1 - 1j * phi) - w) < 1e-9

    def test_poles(self):
        with pytest.raises(PoleError):
            from_w(-1.0)


class TestBoundedClass:
    @pytest.mark.parametrize("delta", [0.1, 1.0, 3.0])
    def test_gdelta_image_bounded_and_upper(self, delta):
        w = to_w(GDelta(delta), _upper_grid())
        cert = w_bound(GDelta(delta)).delta_bound
        assert np.max(np.abs(w)) <= cert + 1e-12 and cert < 1
        assert np.min(GDelta(delta)(_upper_grid()).imag) > 0

    def test_gdelta_one_certificate(self):
        assert w_bound(GDelta(1.0)).delta_bound == pytest.approx(1 / 3, rel=1e-14)

    def test_const_certificates(self):
        assert w_bound(Const(0.0, 1.0)).delta_bound == 0.0
        assert w_bound(Const(1.0, 1.0)).delta_bound == pytest.approx(1 / math.sqrt(5), rel=1e-14)

    def test_shift_certificate_dominates_samples(self):
        phi = ShiftCompose(0.1, Const(0.0, 1.0))
        cert = w_bound(phi)
        assert cert.method == "sampled"
        assert np.max(np.abs(to_w(phi, _upper_grid()))) <= cert.delta_bound

    def test_unbounded_has_no_certificate(self):
        with pytest.raises(CertificateError):
            w_bound(LinearTilde(1.0))

    @pytest.mark.parametrize("z", [1j, 2 + 0.5j, -3 + 4j])
    def test_gdelta_converges_pointwise(self, z):
        errs = [abs(g_delta_map(d, z) - z) for d in (1e-1, 1e-2, 1e-3)]
        assert errs[0] > errs[1] > errs[2] and errs[2] < 1e-2 * max(1, abs(z)) ** 2

    def test_shift_converges_to_inner(self):
        inner = LinearTilde(1.0)
        z = 0.5 + 0.5j
        errs = [abs(ShiftCompose(d, inner)(z) - inner(z)) for d in (1e-1, 1e-2, 1e-3)]
        assert errs[0] > errs[1] > errs[2]

    def test_lower_half_plane_rejected(self):
        with pytest.raises(DomainError):
            GDelta(1.0)(1 - 1j)


class TestMoebius:
    def test_bounded_disk_in_pb(self):
        m = Moebius(-1.0, -1j, 1j, -2.0)  # the coefficients of g_1
        assert m.in_Pb
        assert w_bound(m).delta_bound == pytest.approx(1 / 3, rel=1e-14)
        assert m(0.5 + 0.5j) == pytest.approx(GDelta(1.0)(0.5 + 0.5j), rel=1e-15)

    def test_orientation_reversing_rejected(self):
        with pytest.raises(DomainError):
            Moebius(-1.0, 0.0, 0.0, 1.0)

    def test_degenerate(self):
        with pytest.raises(DomainError):
            Moebius(1, 1, 1, 1)


class TestGrammar:
    @pytest.mark.parametrize("text, expected", [
        ("const:0,1", Const(0.0, 1.0)),
        ("gdelta:1", GDelta(1.0)),
        ("tilde:2.5", LinearTilde(2.5)),
        ("shift:0.1:const:0,1", ShiftCompose(0.1, Const(0.0, 1.0))),
    ])
    def test_parse(self, text, expected):
        assert parse_pick(text) == expected

    def test_depth_cap(self):
        ok = "shift:0.1:" * 3 + "const:0,1"
        parse_pick(ok)
        with pytest.raises(PickSyntaxError, match="deeper than 4"):
            parse_pick("shift:0.1:" * 4 + "const:0,1")

    @pytest.mark.parametrize("text, pos", [("bogus:x", 0), ("const:0", 6), ("const:0,-1", 6),
                                           ("gdelta:a", 7), ("shift:0.1", 6), ("const", 0)])
    def test_errors_carry_position(self, text, pos):
        with pytest.raises(PickSyntaxError) as info:
            parse_pick(text)
        assert info.value.pos == pos

    def test_spec_round_trip(self):
        for text in ("const:1.5,2.0", "gdelta:0.25", "shift:0.1:gdelta:2.0", "tilde:1.2732395447351628"):
            phi = parse_pick(text)
            assert parse_pick(phi.spec) == phi
