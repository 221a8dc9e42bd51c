"""Cauchy transforms, the entire function g, and the identities built on it.

For f in M put C(z) = int mu(x; i) / (x - z) dx with mu(x; i) = (1/pi)|f(x)|^-2.
Then

    g(z) = -f(z) C(z)                     (Im z < 0)
    g(z) = 2i / f_bar(z) - f(z) C(z)      (Im z > 0)

are the two sides of one entire function.  Near the real axis neither
formula is usable, so g is evaluated there by moving the real-line integral
onto a path that passes above Re z along a semicircle of radius r:

    g(z) = -f(z) int_L dzeta / (pi f(zeta) f_bar(zeta) (zeta - z)).

With g_bar(z) = conj(g(conj z)) one has a = (g + g_bar)/2, c = (g_bar - g)/(2i)
and a d - b c = 1, equivalently g f_bar - f g_bar = 2i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .entire import EntireM, count_zeros_in_disk
from .errors import ContourError, DomainError, NearAxisError, ToleranceError
from .measures import MeasureSpec, density_w_form, real_line_edges, tail_bound_T
from .pick import Const, PickFn, to_w
from .quadrature import QuadConfig, integrate_u, u_to_x, x_to_u

__all__ = [
    "GEvaluator",
    "ParamResidual",
    "G_CONFIG",
    "cauchy_transform",
    "g_eval",
    "g_contour",
    "g_bar_eval",
    "side_limit_gap",
    "split_ac",
    "adbc_residual",
    "fg_residual",
    "parametrization_residual",
    "stieltjes_inversion_check",
    "asymptotic_moment_diagnostic",
]

G_CONFIG = QuadConfig(rel_tol=1e-12, abs_tol=1e-15, max_subdivisions=4000)
R_MIN = 1e-2
_ARC_PANELS = 8


def _truncation(spec: MeasureSpec, z: complex, cfg: QuadConfig) -> float:
    # For |x| >= 2|z| the kernel |1/(x - z)| is at most 1, so the mass tail
    # bound is also a bound for the transform tail.
    if cfg.truncation_T != "auto":
        T = float(cfg.truncation_T)
    else:
        T = tail_bound_T(spec, 0, cfg.abs_tol)
    return max(T, 2.0 * abs(z) + 1.0)


@lru_cache(maxsize=32)
def _base_edges(spec: MeasureSpec, U: float, cfg: QuadConfig) -> np.ndarray:
    """Converged panel edges for the density alone; reused for every z."""

    def dens(u):
        return density_w_form(spec, u_to_x(u)) * 2.0 * np.abs(u)

    return integrate_u(dens, real_line_edges(spec.f, U), cfg.rel_tol, cfg.abs_tol,
                       cfg.max_subdivisions).edges


def _pole_breaks(z: complex) -> list[float]:
    # Graded breakpoints around the near-pole at x = Re z.
    h = abs(z.imag)
    pts = [z.real]
    for s in (1.0, 4.0, 16.0, 64.0):
        pts += [z.real - s * h, z.real + s * h]
    return [float(x_to_u(p)) for p in pts]


def _line_integral(spec: MeasureSpec, z: complex, cfg: QuadConfig, lo_u: float, hi_u: float,
                   U: float, extra=()):
    edges = _base_edges(spec, U, cfg)
    pts = np.concatenate([edges, _pole_breaks(z), list(extra), [lo_u, hi_u]])
    pts = np.unique(pts[(pts >= lo_u) & (pts <= hi_u)])

    def integrand(u):
        x = u_to_x(u)
        return density_w_form(spec, x) / (x - z) * 2.0 * np.abs(u)

    return integrate_u(integrand, pts, cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions)


def _check(res, cfg: QuadConfig, what: str):
    if res.error[0] > cfg.rel_tol * res.abs_value[0] + cfg.abs_tol:
        raise ToleranceError(f"{what}: quadrature tolerance not met", estimate=res.value, error=res.error)


def cauchy_transform(spec: MeasureSpec, z: complex, cfg: QuadConfig | None = None,
                     strip_half_width: float = 1e-3) -> complex:
    """I(z) = int mu(x; phi) / (x - z) dx for |Im z| >= strip_half_width.

    Raises
    ------
    NearAxisError
        Closer to the real axis the kernel is too sharp; use :func:`g_eval`.
    """
    cfg = cfg or G_CONFIG
    z = complex(z)
    if abs(z.imag) < strip_half_width:
        raise NearAxisError(f"|Im z| = {abs(z.imag):.3g} is inside the strip {strip_half_width:g}")
    spec.require_certificate()
    U = math.sqrt(_truncation(spec, z, cfg))
    res = _line_integral(spec, z, cfg, -U, U, U)
    _check(res, cfg, "Cauchy transform")
    return complex(res.value[0])


@dataclass(frozen=True, eq=False)
class GEvaluator:
    f: EntireM
    strip_half_width: float = 1e-3
    contour_radius: float = 1.0
    cfg: QuadConfig = G_CONFIG
    base: MeasureSpec = field(init=False)

    def __post_init__(self):
        if not (0 < self.strip_half_width < R_MIN <= self.contour_radius):
            raise DomainError("need 0 < strip_half_width < 1e-2 <= contour_radius")
        object.__setattr__(self, "base", MeasureSpec.build(self.f, Const(0.0, 1.0)))
        # Build the panel cache eagerly so that evaluation is read-only.
        U = math.sqrt(_truncation(self.base, 0j, self.cfg))
        _base_edges(self.base, U, self.cfg)

    def C(self, z: complex) -> complex:
        return cauchy_transform(self.base, z, self.cfg, self.strip_half_width)

    def __call__(self, z):
        return g_eval(self, z)


def _radius_ok(f: EntireM, a: float, r: float) -> bool:
    zeros = f.known_zeros(64)
    if zeros is not None:
        # Zeros of f_bar are the conjugates, so one distance test covers both.
        return all(abs(w - a) > r for w in zeros)
    return count_zeros_in_disk(f, complex(a), r) == 0


def g_contour(ge: GEvaluator, z, radius: float | None = None) -> complex:
    """g(z) by quadrature along the real line detouring over a semicircle.

    The semicircle has centre Re z and radius r (default ``ge.contour_radius``)
    and is traversed clockwise from Re z - r to Re z + r.  Valid for every z
    below the arc.  r is halved, down to 1e-2, while f f_bar has a zero in the
    disk.

    Raises
    ------
    ContourError
        When no admissible radius is found.
    """
    z = complex(z)
    a = z.real
    r = radius or ge.contour_radius
    while not (_radius_ok(ge.f, a, r) and z.imag < 0.5 * r):
        r *= 0.5
        if r < R_MIN:
            raise ContourError(f"zero of f f_bar within {2 * r:g} of {a:g}; contour cannot be placed")
    cfg, spec, f = ge.cfg, ge.base, ge.f
    U = math.sqrt(_truncation(spec, z, cfg) + abs(a) + r)
    lo, hi = float(x_to_u(a - r)), float(x_to_u(a + r))
    left = _line_integral(spec, z, cfg, -U, lo, U)
    right = _line_integral(spec, z, cfg, hi, U, U)

    def arc(theta):
        e = np.exp(1j * theta)
        zeta = a + r * e
        fz, fbz = f.f_and_fbar(zeta)
        return 1.0 / (math.pi * fz * fbz * (zeta - z)) * (1j * r * e)

    top = integrate_u(arc, np.linspace(0.0, math.pi, _ARC_PANELS + 1), cfg.rel_tol, cfg.abs_tol,
                      cfg.max_subdivisions)
    for part in (left, right, top):
        _check(part, cfg, "contour integral")
    # theta runs from pi down to 0, hence the minus sign on the arc.
    total = left.value[0] + right.value[0] - top.value[0]
    return complex(-f.f(z) * total)


def g_eval(ge: GEvaluator, z) -> complex:
    """The entire function g at any z, dispatched on Im z."""
    z = complex(z)
    f = ge.f
    if z.imag <= -ge.strip_half_width:
        return complex(-f.f(z) * ge.C(z))
    if z.imag >= ge.strip_half_width:
        return complex(2j / f.f_bar(z) - f.f(z) * ge.C(z))
    return g_contour(ge, z)


def _extrapolate_to_zero(hs, vals) -> complex:
    # Neville's scheme for the interpolating polynomial evaluated at 0.
    p = list(vals)
    for m in range(1, len(hs)):
        for i in range(len(hs) - m):
            p[i] = (hs[i + m] * p[i] - hs[i] * p[i + 1]) / (hs[i + m] - hs[i])
    return p[0]


def side_limit_gap(ge: GEvaluator, x: float, etas=(0.01, 0.02, 0.03, 0.04, 0.05)) -> float:
    """Distance between the limits at x of the upper and lower half-plane formulas.

    Each one-sided formula is sampled at x +- i eta (outside the strip) and
    extrapolated to eta = 0; g being entire, the two limits must coincide.
    """
    hs = [float(h) for h in etas]
    if min(hs) < ge.strip_half_width:
        raise DomainError("side-limit heights must lie outside the strip")
    up = _extrapolate_to_zero(hs, [g_eval(ge, complex(x, h)) for h in hs])
    down = _extrapolate_to_zero(hs, [g_eval(ge, complex(x, -h)) for h in hs])
    return abs(up - down)


def g_bar_eval(ge: GEvaluator, z) -> complex:
    return g_eval(ge, complex(z).conjugate()).conjugate()


def split_ac(ge: GEvaluator, z) -> tuple[complex, complex]:
    """Real entire a, c with g = a - i c."""
    g = g_eval(ge, z)
    gb = g_bar_eval(ge, z)
    return 0.5 * (g + gb), (gb - g) / 2j


def adbc_residual(ge: GEvaluator, z) -> float:
    a, c = split_ac(ge, z)
    b, d = ge.f.bd(complex(z))
    return abs(a * d - b * c - 1.0)


def fg_residual(ge: GEvaluator, z) -> float:
    """|g f_bar - f g_bar - 2i|."""
    z = complex(z)
    g, gb = g_eval(ge, z), g_bar_eval(ge, z)
    return abs(g * ge.f.f_bar(z) - ge.f.f(z) * gb - 2j)


@dataclass(frozen=True)
class ParamResidual:
    z: complex
    lhs: complex
    rhs: complex
    residual: float
    form_gap: float = 0.0

    def to_dict(self) -> dict:
        return {
            "z": [self.z.real, self.z.imag],
            "lhs": [self.lhs.real, self.lhs.imag],
            "rhs": [self.rhs.real, self.rhs.imag],
            "residual": self.residual,
            "form_gap": self.form_gap,
        }


def parametrization_residual(ge: GEvaluator, phi: PickFn, z, cfg: QuadConfig | None = None) -> ParamResidual:
    """Compare the transform of mu(.; phi) with -(a phi - c)/(b phi - d) at z in H+.

    ``form_gap`` is the relative distance between that expression and the
    equivalent -(w g - g_bar)/(w f - f_bar).
    """
    z = complex(z)
    if z.imag <= ge.strip_half_width:
        raise DomainError("parametrization check needs Im z above the strip")
    spec = MeasureSpec.build(ge.f, phi)
    lhs = cauchy_transform(spec, z, cfg or ge.cfg, ge.strip_half_width)
    g, gb = g_eval(ge, z), g_bar_eval(ge, z)
    a, c = 0.5 * (g + gb), (gb - g) / 2j
    fz, fbz = ge.f.f(z), ge.f.f_bar(z)
    b, d = 0.5 * (fz + fbz), (fbz - fz) / 2j
    p = phi(z)
    rhs = -(a * p - c) / (b * p - d)
    w = to_w(phi, z)
    rhs_w = -(w * g - gb) / (w * fz - fbz)
    gap = abs(rhs - rhs_w) / max(abs(rhs), 1e-300)
    return ParamResidual(z, lhs, complex(rhs), abs(lhs - rhs), gap)


def stieltjes_inversion_check(spec: MeasureSpec, x: float, eps_list, cfg: QuadConfig | None = None) -> list[float]:
    """|(1/pi) Im I(x + i eps) - mu(x; phi)| for each eps."""
    eps = [float(e) for e in eps_list]
    if any(e <= 0 for e in eps) or any(e2 >= e1 for e1, e2 in zip(eps, eps[1:])):
        raise DomainError("eps_list must be positive and strictly decreasing")
    target = float(density_w_form(spec, float(x)))
    return [abs(cauchy_transform(spec, complex(x, e), cfg).imag / math.pi - target) for e in eps]


def asymptotic_moment_diagnostic(ge: GEvaluator, phi: PickFn, heights, power: int = 4) -> list[float]:
    """|F(ih)| h^power with F = 2i w / (f_bar^2 (1 - w f / f_bar))."""
    hs = [float(h) for h in heights]
    if any(h < 10 for h in hs) or any(h2 <= h1 for h1, h2 in zip(hs, hs[1:])):
        raise DomainError("heights must be increasing and at least 10")
    out = []
    for h in hs:
        z = complex(0.0, h)
        w = to_w(phi, z)
        fz, fbz = ge.f.f(z), ge.f.f_bar(z)
        F = 2j * w / (fbz**2 * (1.0 - w * fz / fbz))
        out.append(abs(F) * h**power)
    return out
