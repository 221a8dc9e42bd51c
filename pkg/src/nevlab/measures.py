"""Densities mu(x; phi, f), tail bounds, moments and the vanishing integrals I_n.

For f = b - i d in class M and phi in P_b the density is

    mu(x; phi) = (Im phi(x) / pi) / |d(x) - phi(x) b(x)|**2
               = ((1 - |w(x)|**2) / pi) / |w(x) f(x) - f_bar(x)|**2,

with w the Cayley image of phi.  All moments of mu(.; phi) coincide with
those of mu(.; i) = (1/pi) |f|**-2; the difference is (2/pi) Re I_n, where

    I_n = int x**n w / (f_bar (f_bar - w f)) dx

vanishes.  Integrals are evaluated on [-T, T] in the variable x = +-u**2,
with T chosen from the domination mu(x; phi) <= (1 - delta)**-2 mu(x; i).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammaincc, gammaln

from .entire import EntireM
from .errors import CertificateError, DomainError, EvaluationRangeError, ToleranceError, UnsupportedError
from .pick import Const, PickFn, WBound, to_w, w_bound
from .quadrature import QuadConfig, QuadResult, integrate_mp, integrate_u, u_to_x, uniform_edges

__all__ = [
    "MeasureSpec",
    "MomentVector",
    "density_phi_form",
    "density_w_form",
    "base_density",
    "key_identity_residual",
    "tail_bound_T",
    "moments",
    "In_integral",
    "vanishing_integrals",
    "MAX_MOMENT",
    "IN_CONFIG",
]

MAX_MOMENT = 12
# Initial panel width in u; about one oscillation of cos(u K) for K near 2.
_PANEL_WIDTH = 2.0
# I_n is zero, so its natural target is absolute; the relative part is off.
IN_CONFIG = QuadConfig(rel_tol=1e-30, abs_tol=1e-9, max_subdivisions=20000)
# Half-width of a high-precision zone, in units of the peak width.
_ZONE_WIDTHS = 200.0


@dataclass(frozen=True)
class MeasureSpec:
    f: EntireM
    phi: PickFn
    delta: WBound | None = None

    @classmethod
    def build(cls, f: EntireM, phi: PickFn) -> "MeasureSpec":
        """Attach a w-bound certificate when phi is in P_b."""
        return cls(f, phi, w_bound(phi) if phi.in_Pb else None)

    def require_certificate(self) -> WBound:
        if self.delta is None:
            raise CertificateError(
                f"operation needs phi in P_b with a w-bound; {self.phi!r} has none"
            )
        return self.delta

    def density(self, x):
        return density_w_form(self, x)


def _real_arg(x):
    xx = np.asarray(x)
    return xx if xx.dtype == np.longdouble else xx.astype(float)


def density_phi_form(spec: MeasureSpec, x):
    b, d = spec.f.bd(np.asarray(x, dtype=float))
    b, d = np.real(b), np.real(d)
    p = np.asarray(spec.phi(np.asarray(x, dtype=float)))
    with np.errstate(over="ignore"):  # |f|^2 = inf far out gives density 0
        out = (p.imag / math.pi) / np.abs(d - p * b) ** 2
    return float(out) if np.ndim(x) == 0 else out


def density_w_form(spec: MeasureSpec, x):
    xx = _real_arg(x)
    fx, fbx = spec.f.f_and_fbar(xx)
    w = np.asarray(to_w(spec.phi, xx))
    with np.errstate(over="ignore"):
        out = ((1.0 - np.abs(w) ** 2) / math.pi) / np.abs(w * fx - fbx) ** 2
    return float(out) if np.ndim(x) == 0 else out


def base_density(f: EntireM, x):
    """mu(x; i) = (1/pi) |f(x)|**-2."""
    xx = _real_arg(x)
    with np.errstate(over="ignore"):
        out = (1.0 / math.pi) / np.abs(f.f(xx)) ** 2
    return float(out) if np.ndim(x) == 0 else out


def key_identity_residual(f: EntireM, w: complex, x):
    """|LHS - RHS| of the three-term identity behind moment invariance.

    LHS = (1 - |w|^2)/|w f - f_bar|^2;
    RHS = 1/(f f_bar) + w/(f_bar (f_bar - w f)) + conj(w)/(f (f - conj(w) f_bar)).
    """
    w = complex(w)
    if not abs(w) < 1:
        raise DomainError(f"|w| must be < 1, got {abs(w)!r}")
    fx, fbx = f.f_and_fbar(np.asarray(x, dtype=float))
    wc = w.conjugate()
    lhs = (1.0 - abs(w) ** 2) / np.abs(w * fx - fbx) ** 2
    rhs = 1.0 / (fx * fbx) + w / (fbx * (fbx - w * fx)) + wc / (fx * (fx - wc * fbx))
    out = np.abs(lhs - rhs)
    return float(out) if np.ndim(x) == 0 else out


@lru_cache(maxsize=64)
def _decay_constant(f: EntireM, m: float) -> float:
    # Fitted C with (1/pi)|f(x)|^-2 <= C exp(-m sqrt|x|); 2x safety factor.
    umax = min(math.sqrt(f.max_radius) * 0.5, 200.0)
    u = np.linspace(0.0, umax, 20001)
    worst = 0.0
    for sign in (1.0, -1.0):
        x = sign * u * u
        with np.errstate(over="ignore"):
            h = base_density(f, x) * np.exp(m * u)
        worst = max(worst, float(np.max(h)))
    return 2.0 * worst


def tail_bound_T(spec: MeasureSpec, n: int, tol: float) -> float:
    """Truncation point T with int_{|x|>T} |x|^n (1-delta)^-2 (1/pi)|f|^-2 dx < tol.

    Uses (1/pi)|f(x)|^-2 <= C exp(-m sqrt|x|), m = min(K, K'), and the closed
    form int_T^inf x^n exp(-m sqrt x) dx = 2 Gamma(2n+2, m sqrt T) / m^(2n+2).
    """
    delta = spec.require_certificate().delta_bound
    m = spec.f.decay_rate()
    if m is None:
        raise UnsupportedError(f"no tail decay bound for {spec.f.kind!r} functions")
    if n < 0 or tol <= 0:
        raise DomainError("need n >= 0 and tol > 0")
    C = _decay_constant(spec.f, m)
    a = 2.0 * n + 2.0
    log_pref = math.log(4.0 * C) - 2.0 * math.log1p(-delta) + gammaln(a) - a * math.log(m)

    def log_excess(y):
        q = gammaincc(a, y)
        return (log_pref + math.log(q) if q > 0 else -np.inf) - math.log(tol)

    if log_excess(1e-12) <= 0:
        return 1.0
    hi = max(4.0 * a, 10.0)
    while log_excess(hi) > 0:
        hi *= 2.0
    y = brentq(log_excess, 1e-12, hi, xtol=1e-10)
    T = max(1.0, (y / m) ** 2)
    if T > spec.f.max_radius:
        raise EvaluationRangeError(f"tail bound T = {T:.4g} exceeds evaluation radius")
    return T


def _resolve_T(spec: MeasureSpec, n_max: int, cfg: QuadConfig) -> float:
    if cfg.truncation_T != "auto":
        return float(cfg.truncation_T)
    return tail_bound_T(spec, n_max, cfg.abs_tol)


def real_line_edges(f: EntireM, U: float) -> np.ndarray:
    """Initial panel edges on [-U, U] in u, graded towards the peaks of |f|^-2."""
    right = uniform_edges(0.0, U, _PANEL_WIDTH)
    pts = [-right[::-1], right[1:]]
    for c, w in f.real_features(U):
        steps = w * 3.0 ** np.arange(12)
        steps = steps[steps < 0.5 * _PANEL_WIDTH]
        pts.append(np.clip(np.concatenate([c - steps, [c], c + steps]), -U, U))
    return np.unique(np.concatenate(pts))


@dataclass
class MomentVector:
    values: list
    error_estimates: list
    truncation_T_used: float
    abs_moments: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "values": list(self.values),
            "error_estimates": list(self.error_estimates),
            "abs_moments": list(self.abs_moments),
            "truncation_T_used": self.truncation_T_used,
        }


def _powers(x, n_max):
    return x[None, :] ** np.arange(n_max + 1)[:, None]


def _check_tolerance(res: QuadResult, cfg: QuadConfig, what: str):
    limit = cfg.rel_tol * res.abs_value + cfg.abs_tol
    if np.any(res.error > limit):
        raise ToleranceError(
            f"{what}: error estimate exceeds rel_tol*scale + abs_tol",
            estimate=res.value,
            error=res.error,
        )


def moment_quadrature(spec: MeasureSpec, n_max: int, cfg: QuadConfig, breakpoints=None) -> tuple[QuadResult, float]:
    """Raw quadrature of x^n mu(x; phi) for n = 0..n_max.  Returns (result, T)."""
    spec.require_certificate()
    if not 0 <= n_max <= MAX_MOMENT:
        raise DomainError(f"n_max must lie in 0..{MAX_MOMENT}")
    T = _resolve_T(spec, n_max, cfg)
    U = math.sqrt(T)

    def integrand(u):
        x = u_to_x(u)
        return _powers(x, n_max) * (spec.density(x) * 2.0 * np.abs(u))[None, :]

    edges = real_line_edges(spec.f, U) if breakpoints is None else breakpoints
    # Cancellation inside f at sharp peaks costs digits; long double restores them.
    extended = bool(spec.f.real_features(U))
    res = integrate_u(integrand, edges, cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions, extended=extended)
    return res, T


def moments(spec: MeasureSpec, n_max: int, cfg: QuadConfig | None = None) -> MomentVector:
    """Moments mu_n = int x^n mu(x; phi) dx for n = 0..n_max.

    Error estimates are checked against ``rel_tol * int |x|^n mu dx + abs_tol``;
    the absolute moment is the conditioning scale (odd moments may vanish).

    Raises
    ------
    ToleranceError
        Carries the best estimate and its error when the budget is exhausted.
    """
    cfg = cfg or QuadConfig()
    res, T = moment_quadrature(spec, n_max, cfg)
    _check_tolerance(res, cfg, "moments")
    return MomentVector(
        values=[float(v) for v in np.real(res.value)],
        error_estimates=[float(e) for e in res.error],
        truncation_T_used=T,
        abs_moments=[float(v) for v in res.abs_value],
    )


def _precise_zones(f: EntireM, U: float) -> list[tuple[float, float]]:
    """Neighbourhoods of the sharp peaks of |f|^-2 where long double is not enough."""
    zones = []
    for c, w in f.real_features(U):
        half = min(_ZONE_WIDTHS * w, 0.25 * _PANEL_WIDTH)
        zones.append((max(c - half, -U), min(c + half, U)))
    return zones


def vanishing_integrals(spec: MeasureSpec, n_max: int, cfg: QuadConfig | None = None,
                        extended: bool = True) -> QuadResult:
    """Quadrature of I_n for n = 0..n_max (rows of the returned result).

    The true value is zero while the integrand's absolute mass reaches ~1e10
    at n = 8, so a double-precision sum cannot resolve |I_n| below ~1e-6.
    By default the integrand is therefore evaluated in long double, and the
    narrow peaks reported by ``f.real_features`` (where cancellation inside
    f costs several more digits) in 30-digit mpmath.

    Refinement aims at ``rel_tol * int |integrand| + abs_tol`` per row but,
    unlike :func:`moments`, the estimate is returned rather than raised on:
    the quantity of interest is |I_n| itself, judged against the error.
    """
    cfg = cfg or IN_CONFIG
    spec.require_certificate()
    if not 0 <= n_max <= MAX_MOMENT:
        raise DomainError(f"n_max must lie in 0..{MAX_MOMENT}")
    if isinstance(spec.phi, Const) and spec.phi.value == 1j:
        zeros = np.zeros(n_max + 1, dtype=complex)
        return QuadResult(zeros, np.zeros(n_max + 1), np.zeros(n_max + 1), np.array([0.0, 0.0]))
    T = _resolve_T(spec, n_max, cfg)
    U = math.sqrt(T)
    f, phi = spec.f, spec.phi
    zones = _precise_zones(f, U) if extended else []

    def integrand(u):
        x = u_to_x(u)
        fx, fbx = f.f_and_fbar(x)
        w = np.asarray(to_w(phi, x))
        core = w / (fbx * (fbx - w * fx)) * 2.0 * np.abs(u)
        for lo, hi in zones:
            core[(u > lo) & (u < hi)] = 0.0
        return _powers(x, n_max) * core[None, :]

    edges = real_line_edges(f, U)
    if zones:
        cut = np.array(zones).ravel()
        inside = np.zeros(edges.shape, dtype=bool)
        for lo, hi in zones:
            inside |= (edges > lo) & (edges < hi)
        edges = np.unique(np.concatenate([edges[~inside], cut]))
    res = integrate_u(integrand, edges, cfg.rel_tol, cfg.abs_tol,
                      cfg.max_subdivisions, extended=extended)
    if not zones:
        return res

    def precise(u):
        x = u * u if u >= 0 else -u * u
        fx, fbx = f.f_and_fbar_mp(x)
        p = phi.eval_scalar(x)
        w = (1 + 1j * p) / (1 - 1j * p)
        core = w / (fbx * (fbx - w * fx)) * 2 * abs(u)
        vals, mags = [core], [abs(core)]
        for _ in range(n_max):
            vals.append(vals[-1] * x)
            mags.append(mags[-1] * abs(x))
        return vals, mags

    value, error, absv = res.value.copy(), res.error.copy(), res.abs_value.copy()
    zone_tol = float(np.min(np.maximum(cfg.abs_tol, cfg.rel_tol * absv))) / (2 * len(zones))
    for lo, hi in zones:
        inner = real_line_edges(f, U)
        inner = np.concatenate([[lo, hi], inner[(inner > lo) & (inner < hi)]])
        v, e, a = integrate_mp(precise, inner, n_max + 1, zone_tol, cfg.max_subdivisions)
        value += v
        error += e
        absv += a
    return QuadResult(value, error, absv, res.edges)


def In_integral(spec: MeasureSpec, n: int, cfg: QuadConfig | None = None, extended: bool = True) -> complex:
    return complex(vanishing_integrals(spec, n, cfg, extended).value[n])
