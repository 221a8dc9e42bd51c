"""Closed forms for the Ismail-Valent example and the tilde construction.

With S = 2/sqrt(pi), s = sqrt(x) and modulus k:

    b(x) = S cos(s K/2) cosh(s K'/2),   d(x) = -S sin(s K/2) sinh(s K'/2),
    mu(x; i) = 1 / (2 (cos(s K) + cosh(s K'))),
    B = (sqrt(pi)/2) b - ln(k/k') d / sqrt(pi),   D = S d.

For x < 0 the same expressions are written with t = sqrt(-x) through
cos(it) = cosh t and sin(it) = i sinh t, so every output stays real.

The tilde entry f~ = f + i z b has b~ = b and d~ = d - z b.  With the
linear Pick function phi~(z) = (4/pi)(z + i) the density built from B, D
equals (1/pi)|f~|^-2 when k = k', while D is not a combination of b~, d~.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .entire import IsmailValent, TildeIV
from .errors import DomainError
from .measures import MeasureSpec, base_density, moments
from .pick import Const, LinearTilde, PickFn
from .quadrature import QuadConfig
from .special import EllipticPair

__all__ = [
    "CaseStudyReport",
    "iv_bd_closed",
    "iv_density_closed",
    "iv_BD",
    "nu_via_BD",
    "phi_tilde",
    "case_study",
    "CASE_ABSCISSAE",
]

S = 2.0 / math.sqrt(math.pi)
CASE_ABSCISSAE = (-3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0)
POINTWISE_TOL = 1e-10
CASE2_THRESHOLD = 1e-2
CASE_MAX_MOMENT = 8


def _real_out(x, out):
    return float(out) if np.ndim(x) == 0 else out


def iv_bd_closed(pair: EllipticPair, x):
    """(b(x), d(x)) for real x from the trigonometric/hyperbolic closed forms."""
    xx = np.asarray(x, dtype=float)
    t = np.sqrt(np.abs(xx))
    K, Kp = pair.K, pair.Kp
    pos = xx >= 0
    b = np.where(pos, np.cos(t * K / 2) * np.cosh(t * Kp / 2), np.cosh(t * K / 2) * np.cos(t * Kp / 2))
    d = np.where(pos, -np.sin(t * K / 2) * np.sinh(t * Kp / 2), np.sinh(t * K / 2) * np.sin(t * Kp / 2))
    return _real_out(x, S * b), _real_out(x, S * d)


def iv_density_closed(pair: EllipticPair, x):
    xx = np.asarray(x, dtype=float)
    t = np.sqrt(np.abs(xx))
    K, Kp = pair.K, pair.Kp
    den = np.where(xx >= 0, np.cos(t * K) + np.cosh(t * Kp), np.cosh(t * K) + np.cos(t * Kp))
    return _real_out(x, 0.5 / den)


def iv_BD(pair: EllipticPair, x):
    b, d = iv_bd_closed(pair, x)
    log_ratio = math.log(pair.k / pair.kp)
    B = (math.sqrt(math.pi) / 2) * np.asarray(b) - log_ratio / math.sqrt(math.pi) * np.asarray(d)
    D = S * np.asarray(d)
    return _real_out(x, B), _real_out(x, D)


def phi_tilde() -> LinearTilde:
    """(4/pi)(z + i)."""
    return LinearTilde(4.0 / math.pi)


def nu_via_BD(pair: EllipticPair, phi: PickFn, x):
    """(Im phi(x) / pi) / |D(x) - phi(x) B(x)|^2."""
    xx = np.asarray(x, dtype=float)
    p = np.asarray(phi(xx))
    if np.any(p.imag <= 0):
        raise DomainError("nu_via_BD needs Im phi(x) > 0")
    B, D = iv_BD(pair, xx)
    out = (p.imag / math.pi) / np.abs(D - p * B) ** 2
    return _real_out(x, out)


@dataclass
class CaseStudyReport:
    k: float
    pointwise_residuals: list
    moment_match: list
    verdict: str
    notes: str = ""
    moment_budgets: list = field(default_factory=list)
    case2_residual: float = float("nan")

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "pointwise_residuals": [[x, r] for x, r in self.pointwise_residuals],
            "moment_match": [list(row) for row in self.moment_match],
            "moment_budgets": list(self.moment_budgets),
            "case2_residual": self.case2_residual,
            "verdict": self.verdict,
            "notes": self.notes,
        }


def case2_residual(pair: EllipticPair, grid=None) -> float:
    """Relative least-squares residual of D against span{b~, d~} on a grid."""
    x = np.linspace(-10.0, 10.0, 401) if grid is None else np.asarray(grid, dtype=float)
    b, d = iv_bd_closed(pair, x)
    A = np.column_stack([b, d - x * b])
    _, D = iv_BD(pair, x)
    coef, *_ = np.linalg.lstsq(A, D, rcond=None)
    return float(np.linalg.norm(A @ coef - D) / np.linalg.norm(D))


def case_study(pair: EllipticPair, cfg: QuadConfig | None = None) -> CaseStudyReport:
    """Run the worked example at modulus ``pair.k``.

    The pointwise density identity only holds when k = k' (the log term in B
    must vanish); at other moduli its residuals are reported in ``notes``
    and do not enter the verdict.
    """
    cfg = cfg or QuadConfig()
    f, ft = IsmailValent(pair), TildeIV(pair)
    xs = np.array(CASE_ABSCISSAE)
    nu = nu_via_BD(pair, phi_tilde(), xs)
    mu_t = base_density(ft, xs)
    pointwise = [(float(x), float(abs(a - b))) for x, a, b in zip(xs, nu, mu_t)]
    symmetric = math.isclose(pair.k, pair.kp, rel_tol=0, abs_tol=4e-16)

    m_f = moments(MeasureSpec.build(f, Const(0.0, 1.0)), CASE_MAX_MOMENT, cfg)
    m_t = moments(MeasureSpec.build(ft, Const(0.0, 1.0)), CASE_MAX_MOMENT, cfg)
    match, budgets = [], []
    for n in range(CASE_MAX_MOMENT + 1):
        gap = abs(m_f.values[n] - m_t.values[n])
        match.append((n, m_f.values[n], m_t.values[n], gap))
        budgets.append(m_f.error_estimates[n] + m_t.error_estimates[n])
    moments_ok = all(row[3] <= bud for row, bud in zip(match, budgets))
    resid = case2_residual(pair)

    notes = []
    worst = max(r for _, r in pointwise)
    if symmetric:
        pointwise_ok = worst < POINTWISE_TOL
    else:
        pointwise_ok = True
        notes.append(
            f"k != k': the log(k/k') term in B breaks nu(x; phi~) = mu(x; i, f~); "
            f"max pointwise gap {worst:.3e} reported as a diagnostic"
        )
    if resid <= CASE2_THRESHOLD:
        notes.append(f"D appears representable by b~, d~ (residual {resid:.3e})")
    ok = pointwise_ok and moments_ok and resid > CASE2_THRESHOLD
    return CaseStudyReport(
        k=pair.k,
        pointwise_residuals=pointwise,
        moment_match=match,
        verdict="pass" if ok else "fail",
        notes="; ".join(notes),
        moment_budgets=budgets,
        case2_residual=resid,
    )
