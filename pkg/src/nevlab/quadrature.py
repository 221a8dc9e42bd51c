"""Vector-valued adaptive Gauss-Kronrod quadrature on the real line.

Integrals over x in R are taken in the variable u with x = sign(u) * u**2,
dx = 2|u| du.  Integrands built from cos(sqrt(x) K) then oscillate with a
fixed frequency in u, so a uniform panel rule copes with them.

The engine integrates several integrands at once (one row each) on a shared
panel set.  Refinement stops once every row's summed Kronrod-minus-Gauss
error meets its tolerance; until then, panels whose error exceeds the row
tolerance times their share of the total length (and is above the rounding
floor) are bisected.  Panel sums are formed in left-to-right
order with numpy's pairwise summation, so results do not depend on the
order in which panels were refined.  A bisection that fails to halve an
error already below 1e6 eps of the panel mass is taken as roundoff and the
panel is left alone; its error still counts in the reported estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np

from .errors import DomainError, ToleranceError

__all__ = ["QuadConfig", "QuadResult", "gauss_kronrod", "integrate_u", "integrate_mp", "x_to_u", "u_to_x"]

# 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
# Kept as strings so the extended-precision tables get every digit.
_XGK = """
    0.995657163025808080735527280689003 0.973906528517171720077964012084452
    0.930157491355708226001207180059508 0.865063366688984510732096688423493
    0.780817726586416897063717578345042 0.679409568299024406234327365114874
    0.562757134668604683339000099272694 0.433395394129247190799265943165784
    0.294392862701460198131126603103866 0.148874338981631210884826001129720
    0.0""".split()
_WGK = """
    0.011694638867371874278064396062192 0.032558162307964727478818972459390
    0.054755896574351996031381300244580 0.075039674810919952767043140916190
    0.093125454583697605535065465083366 0.109387158802297641899210590325805
    0.123491976262065851077208931583410 0.134709217311473325928054001771707
    0.142775938577060080797094273138717 0.147739104901338491374841515972068
    0.149445554002916905664936468389821""".split()
_WG = """
    0.066671344308688137593568809893332 0.149451349150580593145776339657697
    0.219086362515982043995534934228163 0.269266719309996355091226921569469
    0.295524224714752870173892994651338""".split()


def _tables(dtype):
    xgk = np.array([dtype(v) for v in _XGK])
    wgk = np.array([dtype(v) for v in _WGK])
    wg = np.array([dtype(v) for v in _WG])
    nodes = np.concatenate([-xgk[:-1], xgk[::-1]])
    kron = np.concatenate([wgk[:-1], wgk[::-1]])
    gauss = np.zeros(21, dtype=dtype)
    gauss[1::2] = np.concatenate([wg, wg[::-1]])
    return nodes, kron, gauss


NODES, KRONROD_W, GAUSS_W = _tables(np.float64)
_EXTENDED = _tables(np.longdouble)

_EPS = np.finfo(float).eps
ROUNDING_FLOOR = 50 * _EPS
_FLOOR_EXT = 50 * np.finfo(np.longdouble).eps


def gauss_kronrod():
    """Return (nodes, kronrod_weights, gauss_weights) on [-1, 1]."""
    return NODES.copy(), KRONROD_W.copy(), GAUSS_W.copy()


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000
    truncation_T: float | str = "auto"

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be at least 1")
        if self.truncation_T != "auto":
            if isinstance(self.truncation_T, str) or not float(self.truncation_T) > 0:
                raise DomainError("truncation_T must be 'auto' or a positive number")

    def tightened(self, factor: float = 10.0) -> "QuadConfig":
        return QuadConfig(self.rel_tol / factor, self.abs_tol / factor,
                          self.max_subdivisions * 4, self.truncation_T)


@dataclass
class QuadResult:
    value: np.ndarray
    error: np.ndarray
    abs_value: np.ndarray
    edges: np.ndarray = field(repr=False)

    @property
    def n_panels(self) -> int:
        return len(self.edges) - 1


def x_to_u(x):
    return np.sign(x) * np.sqrt(np.abs(x))


def u_to_x(u):
    return np.sign(u) * u * u


def _panel_rules(fun, a, b, tables):
    nodes, kw, gw = tables
    a = a.astype(nodes.dtype)
    b = b.astype(nodes.dtype)
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    u = mid[:, None] + half[:, None] * nodes[None, :]
    vals = np.asarray(fun(u.ravel()))
    if vals.ndim == 1:
        vals = vals[None, :]
    vals = vals.reshape(vals.shape[0], len(a), nodes.size)
    kron = (vals @ kw) * half
    gauss = (vals @ gw) * half
    absk = (np.abs(vals) @ kw) * np.abs(half)
    return kron, np.abs(kron - gauss), absk


def integrate_u(fun, breakpoints, rel_tol=1e-10, abs_tol=1e-14, max_panels=2000, extended=False):
    """Adaptively integrate the rows of ``fun(u)`` over [min, max] of breakpoints.

    Parameters
    ----------
    fun : callable
        Maps a 1-D array of u values to an array of shape (m, len(u)) (or
        (len(u),) for a single integrand).  Real or complex.
    breakpoints : array_like
        Initial panel edges; at least two distinct values.
    rel_tol, abs_tol : float
        Row j must satisfy ``error_j <= max(abs_tol, rel_tol * abs_value_j)``
        where ``abs_value_j`` is the integral of ``|row_j|``.
    max_panels : int
        Cap on the number of bisections beyond the initial panels.
    extended : bool
        Run nodes, weights and sums in numpy long double; ``fun`` then
        receives long double abscissae and should keep that precision.
        The returned values stay long double.

    Raises
    ------
    ToleranceError
        When the cap is hit before the tolerance is met.
    """
    edges = np.unique(np.asarray(breakpoints, dtype=float))
    if edges.size < 2:
        raise DomainError("need at least two distinct breakpoints")
    total = edges[-1] - edges[0]
    tables = _EXTENDED if extended else (NODES, KRONROD_W, GAUSS_W)
    floor = _FLOOR_EXT if extended else ROUNDING_FLOOR
    a, b = edges[:-1], edges[1:]
    val, err, absv = _panel_rules(fun, a, b, tables)
    stuck = np.zeros(err.shape, dtype=bool)
    noise_rel = 1e6 * (np.finfo(np.longdouble).eps if extended else _EPS)
    splits = 0

    while True:
        scale = absv.sum(axis=1)
        tol = np.maximum(abs_tol, rel_tol * scale)
        if np.all(err.sum(axis=1) <= tol):
            break
        share = (b - a) / total
        ok = (err <= tol[:, None] * share[None, :]) | (err <= floor * absv) | stuck
        bad = ~np.all(ok, axis=0)
        if not bad.any():
            break
        splits += int(bad.sum())
        if splits > max_panels:
            order = np.argsort(a)
            raise ToleranceError(
                f"quadrature needs more than {max_panels} subdivisions "
                f"(max error/tol = {float(np.max(err.sum(axis=1) / tol)):.3g})",
                estimate=np.sum(val[:, order], axis=1),
                error=err.sum(axis=1),
            )
        ba, bb = a[bad], b[bad]
        mid = 0.5 * (ba + bb)
        na = np.concatenate([ba, mid])
        nb = np.concatenate([mid, bb])
        nval, nerr, nabs = _panel_rules(fun, na, nb, tables)
        # Roundoff detection: bisection that fails to halve an already tiny
        # relative error is chasing integrand noise, so stop refining there.
        nb_ = int(bad.sum())
        child = nerr[:, :nb_] + nerr[:, nb_:]
        child_abs = nabs[:, :nb_] + nabs[:, nb_:]
        noisy = (child > 0.5 * err[:, bad]) & (child <= noise_rel * child_abs)
        noisy = np.concatenate([noisy, noisy], axis=1)
        keep = ~bad
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        val = np.concatenate([val[:, keep], nval], axis=1)
        err = np.concatenate([err[:, keep], nerr], axis=1)
        absv = np.concatenate([absv[:, keep], nabs], axis=1)
        stuck = np.concatenate([stuck[:, keep], noisy], axis=1)

    order = np.argsort(a)
    val, err, absv = val[:, order], err[:, order], absv[:, order]
    value = np.sum(val, axis=1)
    abs_value = np.sum(absv, axis=1)
    error = np.sum(err, axis=1) + floor * abs_value
    if extended:
        out_type = np.clongdouble if np.iscomplexobj(value) else np.longdouble
    else:
        out_type = complex if np.iscomplexobj(value) else float
    return QuadResult(
        value=value.astype(out_type),
        error=error.astype(float),
        abs_value=abs_value.astype(float),
        edges=np.append(a[order], b[order][-1]).astype(float),
    )


@lru_cache(maxsize=8)
def _mp_gauss(dps):
    # mpmath's Gauss-Legendre levels 3 and 4: 12 and 24 nodes on [-1, 1].
    rule = mpmath.calculus.quadrature.GaussLegendre(mpmath.mp)
    prec = int(dps * 3.33) + 20
    return rule.calc_nodes(3, prec), rule.calc_nodes(4, prec)


def _mp_panel(fun, a, b, rows):
    half = (b - a) / 2
    mid = (a + b) / 2
    sums = []
    for nodes in _mp_gauss(mpmath.mp.dps):
        acc = [mpmath.mpf(0)] * rows
        absacc = [mpmath.mpf(0)] * rows
        for x, w in nodes:
            vals, absvals = fun(mid + half * x)
            for r in range(rows):
                acc[r] += w * vals[r]
                absacc[r] += w * absvals[r]
        sums.append((acc, absacc))
    (lo, _), (hi, absv) = sums
    return ([v * half for v in hi], [abs((h - g) * half) for h, g in zip(hi, lo)],
            [v * abs(half) for v in absv])


def _to_clongdouble(v):
    v = mpmath.mpc(v)
    re = np.longdouble(mpmath.nstr(v.real, 24, min_fixed=1, max_fixed=0))
    im = np.longdouble(mpmath.nstr(v.imag, 24, min_fixed=1, max_fixed=0))
    return np.clongdouble(re) + np.clongdouble(1j) * im


def integrate_mp(fun, breakpoints, rows, abs_tol, max_panels=2000, dps=30):
    """Adaptive Gauss-Legendre (24 vs 12 nodes) in mpmath for short, ill-conditioned pieces.

    ``fun(u)`` takes an mpf and returns two length-``rows`` lists: the
    integrand values and their moduli.  Refinement
    continues until every row's summed error is below ``abs_tol``.  Returns
    (values, errors, abs_values); values are long double complex so that they
    can be added to an extended-precision sum without losing digits.
    """
    with mpmath.workdps(dps):
        edges = sorted(set(float(e) for e in breakpoints))
        panels = []
        for a, b in zip(edges[:-1], edges[1:]):
            a, b = mpmath.mpf(a), mpmath.mpf(b)
            panels.append((a, b, *_mp_panel(fun, a, b, rows)))
        total = mpmath.mpf(edges[-1] - edges[0])
        splits = 0
        while True:
            errs = [sum(p[3][r] for p in panels) for r in range(rows)]
            if all(e <= abs_tol for e in errs):
                break
            keep, bad = [], []
            for p in panels:
                share = (p[1] - p[0]) / total
                (bad if any(p[3][r] > abs_tol * share for r in range(rows)) else keep).append(p)
            splits += len(bad)
            if splits > max_panels:
                raise ToleranceError(
                    f"high-precision quadrature needs more than {max_panels} subdivisions",
                    estimate=np.array([complex(sum(p[2][r] for p in panels)) for r in range(rows)]),
                    error=np.array([float(e) for e in errs]),
                )
            for p in bad:
                a, b = p[0], p[1]
                m = (a + b) / 2
                keep.append((a, m, *_mp_panel(fun, a, m, rows)))
                keep.append((m, b, *_mp_panel(fun, m, b, rows)))
            panels = sorted(keep, key=lambda p: p[0])
        value = np.array([_to_clongdouble(mpmath.fsum(p[2][r] for p in panels)) for r in range(rows)])
        error = np.array([float(mpmath.fsum(p[3][r] for p in panels)) for r in range(rows)])
        absv = np.array([float(mpmath.fsum(p[4][r] for p in panels)) for r in range(rows)])
    return value, error, absv


def uniform_edges(lo: float, hi: float, width: float) -> np.ndarray:
    n = max(1, int(math.ceil((hi - lo) / width)))
    return np.linspace(lo, hi, n + 1)
