"""Verification suites: named batches of residual checks with tolerances.

Each suite returns a :class:`SuiteResult` whose checks carry the measured
residual, its tolerance and a pass flag.  The CLI serialises these; the test
suite asserts on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .entire import TWO_OVER_SQRT_PI, EntireM, IsmailValent, TildeIV, check_membership
from .measures import (
    IN_CONFIG,
    MeasureSpec,
    base_density,
    density_phi_form,
    density_w_form,
    key_identity_residual,
    moments,
    vanishing_integrals,
)
from .pick import Const, GDelta, PickFn, ShiftCompose
from .quadrature import QuadConfig
from .transforms import (
    GEvaluator,
    adbc_residual,
    fg_residual,
    parametrization_residual,
    side_limit_gap,
    stieltjes_inversion_check,
)

__all__ = [
    "Check",
    "SuiteResult",
    "pick_catalogue",
    "suite_identity",
    "suite_adbc",
    "suite_fg",
    "suite_parametrization",
    "suite_in_zero",
    "suite_stieltjes",
    "suite_membership",
    "suite_properties",
    "compare_moments",
    "SUITES",
]

IDENTITY_TOL = 1e-10
ADBC_TOL = 1e-7
FG_TOL = 1e-7
SIDE_LIMIT_TOL = 1e-6
PARAM_TOL = 1e-6
FORM_TOL = 1e-12
IN_ZERO_TOL = 1e-7
MOMENT_REL_TOL = 1e-8

PARAM_POINTS = (1j, 1 + 1j, -2 + 0.5j, 3 + 2j, 0.5 + 0.1j)
STIELTJES_POINTS = (-2.0, -1.0, 0.0, 1.0, 2.0)
STIELTJES_EPS = (0.1, 0.05, 0.025)


@dataclass
class Check:
    label: str
    residual: float
    tol: float
    passed: bool

    def to_dict(self) -> dict:
        return {"label": self.label, "residual": self.residual, "tol": self.tol, "pass": self.passed}


@dataclass
class SuiteResult:
    name: str
    checks: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def add(self, label: str, residual: float, tol: float, passed: bool | None = None):
        residual = float(residual)
        ok = residual < tol if passed is None else bool(passed)
        self.checks.append(Check(label, residual, float(tol), ok))

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    @property
    def mean_residual(self) -> float:
        return float(np.mean([c.residual for c in self.checks])) if self.checks else 0.0

    def to_dict(self) -> dict:
        out = {"suite": self.name, "checks": [c.to_dict() for c in self.checks]}
        out.update(self.extra)
        return out


def pick_catalogue() -> list[PickFn]:
    """The P_b members exercised throughout: i, 2i, 1+i, g_1 and a shifted i."""
    return [Const(0.0, 1.0), Const(0.0, 2.0), Const(1.0, 1.0), GDelta(1.0),
            ShiftCompose(0.1, Const(0.0, 1.0))]


def _grid(spec: str | None) -> list[complex]:
    # "re_lo:re_hi:n x im_lo:im_hi:m"
    spec = spec or "-5:5:5x-2:2:5"
    re_part, im_part = spec.split("x")
    r0, r1, rn = re_part.split(":")
    i0, i1, im = im_part.split(":")
    xs = np.linspace(float(r0), float(r1), int(rn))
    ys = np.linspace(float(i0), float(i1), int(im))
    return [complex(x, y) for y in ys for x in xs]


def _fmt(z: complex) -> str:
    return f"{z.real:.6g}{z.imag:+.6g}i"


def suite_identity(f: EntireM, seed: int = 0, samples: int = 500) -> SuiteResult:
    """Three-term identity at random (x, w), a tenth of them with |w| = 0.99."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("identity")
    x = rng.uniform(-20.0, 20.0, samples)
    rad = 0.99 * np.sqrt(rng.uniform(0.0, 1.0, samples))
    rad[: samples // 10] = 0.99
    w = rad * np.exp(1j * rng.uniform(-math.pi, math.pi, samples))
    worst = max(float(key_identity_residual(f, complex(wi), xi)) for xi, wi in zip(x, w))
    res.add(f"max over {samples} samples (seed {seed})", worst, IDENTITY_TOL)
    return res


def suite_adbc(f: EntireM, grid: str | None = None, real_points: int = 20) -> SuiteResult:
    ge = GEvaluator(f)
    res = SuiteResult("adbc")
    pts = _grid(grid) + [complex(x, 0.0) for x in np.linspace(-5.0, 5.0, real_points)]
    for z in pts:
        res.add(f"z={_fmt(z)}", adbc_residual(ge, z), ADBC_TOL)
    return res


def suite_fg(f: EntireM, grid: str | None = None, real_points: int = 20) -> SuiteResult:
    ge = GEvaluator(f)
    res = SuiteResult("fg")
    pts = _grid(grid) + [complex(x, 0.0) for x in np.linspace(-5.0, 5.0, real_points)]
    for z in pts:
        res.add(f"fg z={_fmt(z)}", fg_residual(ge, z), FG_TOL)
    for x in np.linspace(-10.0, 10.0, real_points):
        res.add(f"side-limit x={x:.6g}", side_limit_gap(ge, float(x)), SIDE_LIMIT_TOL)
    return res


def suite_parametrization(f: EntireM, picks=None, points=PARAM_POINTS) -> SuiteResult:
    ge = GEvaluator(f)
    res = SuiteResult("parametrization")
    picks = [p for p in (picks or pick_catalogue()) if p.in_Pb]
    for phi in picks:
        for z in points:
            pr = parametrization_residual(ge, phi, z)
            res.add(f"{phi.spec} z={_fmt(complex(z))}", pr.residual, PARAM_TOL)
            res.add(f"{phi.spec} z={_fmt(complex(z))} forms", pr.form_gap, FORM_TOL)
    return res


def suite_in_zero(f: EntireM, picks=None, n_range=(0, 8), cfg: QuadConfig | None = None) -> SuiteResult:
    lo, hi = n_range
    res = SuiteResult("in-zero")
    picks = picks or [Const(0.0, 2.0), GDelta(1.0)]
    for phi in picks:
        q = vanishing_integrals(MeasureSpec.build(f, phi), hi, cfg or IN_CONFIG)
        for n in range(lo, hi + 1):
            res.add(f"{phi.spec} |I_{n}| (error estimate {float(q.error[n]):.3g})", abs(complex(q.value[n])),
                    IN_ZERO_TOL)
    return res


def suite_stieltjes(f: EntireM, phi: PickFn | None = None, points=STIELTJES_POINTS,
                    eps=STIELTJES_EPS, cfg: QuadConfig | None = None) -> SuiteResult:
    """Errors of (1/pi) Im I(x + i eps) must fall strictly, ending below half the first."""
    spec = MeasureSpec.build(f, phi or Const(0.0, 1.0))
    res = SuiteResult("stieltjes")
    seqs = {}
    for x in points:
        errs = stieltjes_inversion_check(spec, x, eps, cfg)
        seqs[f"{x:.6g}"] = errs
        decreasing = all(b < a for a, b in zip(errs, errs[1:]))
        ratio = errs[-1] / errs[0] if errs[0] > 0 else 0.0
        res.add(f"x={x:.6g} final/initial error", ratio, 0.5, decreasing and ratio < 0.5)
    res.extra["errors"] = seqs
    res.extra["eps"] = list(eps)
    return res


def suite_membership(f: EntireM) -> SuiteResult:
    rep = check_membership(f)
    res = SuiteResult("membership", extra={"membership": rep.to_dict()})
    res.add("zeros in the upper half-plane", 0.0 if rep.zeros_ok else 1.0, 0.5, rep.zeros_ok)
    res.add(f"decay verdict {rep.verdict}", 0.0 if rep.verdict == "pass" else 1.0, 0.5, rep.verdict == "pass")
    return res


def _flipped_root(f: EntireM, z: np.ndarray) -> np.ndarray | None:
    """f(z) recomputed with -sqrt(z) in place of sqrt(z), for the catalogue entries."""
    if isinstance(f, IsmailValent):
        return TWO_OVER_SQRT_PI * np.cos(-np.sqrt(z) * f.omega / 2.0)
    if isinstance(f, TildeIV):
        fz = _flipped_root(f.base, z)
        fbz = np.conj(_flipped_root(f.base, np.conj(z)))
        return fz + 1j * z * 0.5 * (fz + fbz)
    return None


def suite_properties(f: EntireM, seed: int = 0, samples: int = 400) -> SuiteResult:
    """Seeded randomized structural checks.

    * |f / f_bar| < 1 and Im(-d/b) > 0 in the upper half-plane;
    * the value does not depend on the sign of sqrt(z), and f is continuous
      across the negative real axis;
    * f has no real zeros on [-50, 50];
    * the phi- and w-forms of the density agree and are positive;
    * mu(x; phi) <= (1 - delta)^-2 mu(x; i) for each certified phi.
    """
    rng = np.random.default_rng(seed)
    res = SuiteResult("properties")
    z = rng.uniform(-50.0, 50.0, samples) + 1j * rng.uniform(1e-3, 30.0, samples)
    ratio = np.abs(f.f(z) / f.f_bar(z))
    res.add("max |f/f_bar| on H+", float(ratio.max()), 1.0)
    b, d = f.bd(z)
    keep = np.abs(b) > 1e-12
    q = float(np.min((-d[keep] / b[keep]).imag))
    res.add("min Im(-d/b) on H+ (negated)", -q, 0.0, q > 0)

    zd = 20.0 * np.sqrt(rng.uniform(0.0, 1.0, 200)) * np.exp(1j * rng.uniform(-math.pi, math.pi, 200))
    flipped = _flipped_root(f, zd)
    if flipped is not None:
        fz = f.f(zd)
        res.add("relative change under sqrt(z) -> -sqrt(z)", float(np.max(np.abs(flipped - fz) / np.abs(fz))),
                1e-12)

    grid = np.linspace(-50.0, 50.0, 20001)
    res.add("min |f(x)| on [-50, 50] (negated)", -float(np.min(np.abs(f.f(grid)))), 0.0,
            bool(np.min(np.abs(f.f(grid))) > 0))

    x = -rng.uniform(0.01, 400.0, samples)
    eta = 1e-13
    up, down = f.f(x + 1j * eta), f.f(x - 1j * eta)
    jump = float(np.max(np.abs(up - down) / np.abs(f.f(x))))
    res.add("relative jump across the negative axis", jump, 1e-9)

    xs = rng.uniform(-40.0, 40.0, samples)
    mu_i = base_density(f, xs)
    for phi in pick_catalogue():
        spec = MeasureSpec.build(f, phi)
        a, w = density_phi_form(spec, xs), density_w_form(spec, xs)
        res.add(f"{phi.spec} form gap (relative)", float(np.max(np.abs(a - w) / w)), 1e-12)
        res.add(f"{phi.spec} min density (negated)", -float(np.min(w)), 0.0, bool(np.min(w) > 0))
        bound = (1.0 - spec.delta.delta_bound) ** -2 * mu_i
        excess = float(np.max(w / bound))
        res.add(f"{phi.spec} max mu/((1-delta)^-2 mu_i)", excess, 1.0 + 1e-12)
    return res


def compare_moments(f: EntireM, phi: PickFn, n_max: int, cfg: QuadConfig | None = None) -> SuiteResult:
    """Moments of mu(.; phi) against the phi = i baseline, entry by entry."""
    cfg = cfg or QuadConfig()
    base = moments(MeasureSpec.build(f, Const(0.0, 1.0)), n_max, cfg)
    mv = moments(MeasureSpec.build(f, phi), n_max, cfg)
    res = SuiteResult("moments-compare", extra={"moments": mv.to_dict(), "baseline": base.to_dict()})
    for n in range(n_max + 1):
        gap = abs(mv.values[n] - base.values[n])
        budget = mv.error_estimates[n] + base.error_estimates[n]
        scale = max(base.abs_moments[n], 1e-300)
        ok = gap <= budget and gap <= MOMENT_REL_TOL * scale
        res.add(f"n={n} gap (budget {budget:.3g})", gap, budget, ok)
    return res


SUITES = {
    "identity": suite_identity,
    "adbc": suite_adbc,
    "fg": suite_fg,
    "parametrization": suite_parametrization,
    "in-zero": suite_in_zero,
    "stieltjes": suite_stieltjes,
    "membership": suite_membership,
}
