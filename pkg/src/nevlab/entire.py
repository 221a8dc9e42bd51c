"""Entire functions of class M and their real split f = b - i d.

A function of class M is an entire function whose zeros all lie in the open
upper half-plane and whose reciprocal decays faster than any power of z,
uniformly on the closed lower half-plane.  Three representations are
provided:

``IsmailValent``
    f(z) = (2/sqrt(pi)) cos(sqrt(z) (K - i K') / 2), built from an
    :class:`~nevlab.special.EllipticPair`.
``TildeIV``
    f~(z) = f(z) + i z b(z), a second member of M with b~ = b, d~ = d - z b.
``ZeroProduct``
    C * prod(1 - z/z_n) over a finite list of zeros.  Exploratory only: a
    polynomial can never satisfy the decay condition.

All evaluators accept scalars or numpy arrays.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, EvaluationRangeError
from .special import EllipticPair, elliptic_pair

__all__ = [
    "EntireM",
    "IsmailValent",
    "TildeIV",
    "ZeroProduct",
    "MembershipReport",
    "eval_f",
    "eval_f_bar",
    "split_bd",
    "zeros_iv",
    "check_membership",
    "count_zeros_lower_half_disk",
    "count_zeros_in_disk",
    "entire_from_config",
]

TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)
# Largest |Im| of the cosine argument we allow; exp(690) is still finite.
_COS_IM_LIMIT = 690.0
DEFAULT_RADIUS_CAP = 1e6


def _as_complex(z):
    z = np.asarray(z)
    if z.dtype in (np.longdouble, np.clongdouble):
        return z.astype(np.clongdouble)
    return z.astype(complex)


def _unwrap_scalar(z_in, out):
    if np.ndim(z_in) != 0:
        return out
    return out[()] if out.dtype == np.clongdouble else complex(out)


class EntireM:
    """Base class.  Subclasses implement ``_f`` on complex numpy arrays."""

    kind: str = "abstract"
    label: str = ""
    max_radius: float = DEFAULT_RADIUS_CAP

    def _f(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _guard(self, z: np.ndarray) -> None:
        if z.size and np.max(np.abs(z)) > self.max_radius:
            raise EvaluationRangeError(
                f"|z| = {np.max(np.abs(z)):.3g} exceeds the evaluation radius "
                f"{self.max_radius:.3g} of {self.label or self.kind}"
            )

    def f(self, z):
        zz = _as_complex(z)
        self._guard(zz)
        return _unwrap_scalar(z, self._f(zz))

    def f_bar(self, z):
        zz = _as_complex(z)
        self._guard(zz)
        return _unwrap_scalar(z, np.conj(self._f(np.conj(zz))))

    def bd(self, z):
        """Return (b(z), d(z)) with b = (f + f_bar)/2 and d = (f_bar - f)/(2i)."""
        zz = _as_complex(z)
        self._guard(zz)
        fz = self._f(zz)
        fbz = np.conj(self._f(np.conj(zz)))
        b = 0.5 * (fz + fbz)
        d = (fbz - fz) / 2j
        return _unwrap_scalar(z, b), _unwrap_scalar(z, d)

    def f_and_fbar(self, z):
        zz = _as_complex(z)
        self._guard(zz)
        return self._f(zz), np.conj(self._f(np.conj(zz)))

    def f_mp(self, z):
        """Scalar evaluation in mpmath at the ambient working precision.

        Uses the same double-precision parameters as the numpy path, so both
        evaluate one and the same function.
        """
        raise NotImplementedError(f"no mpmath evaluator for {self.kind!r}")

    def f_bar_mp(self, z):
        return mpmath.conj(self.f_mp(mpmath.conj(z)))

    def f_and_fbar_mp(self, z):
        fz = self.f_mp(z)
        return fz, (mpmath.conj(fz) if isinstance(z, mpmath.mpf) else self.f_bar_mp(z))

    def known_zeros(self, n_max: int):
        """Zeros from an analytic formula, or None when no formula is known."""
        return None

    def decay_rate(self) -> float | None:
        """Exponent m with |f(x)|^-2 = O(exp(-m sqrt|x|)) on the real line."""
        return None

    def real_features(self, umax: float) -> list[tuple[float, float]]:
        """Narrow peaks of |f(x)|^-2 as (center, width) in u = sign(x) sqrt|x|."""
        return []


def _cos_radius_cap(pair: EllipticPair) -> float:
    modulus = abs(complex(pair.K, -pair.Kp))
    return min(DEFAULT_RADIUS_CAP, (2.0 * _COS_IM_LIMIT / modulus) ** 2)


@dataclass(frozen=True, eq=False)
class IsmailValent(EntireM):
    pair: EllipticPair
    label: str = "iv"
    max_radius: float = field(default=0.0)
    kind = "iv"

    def __post_init__(self):
        if not self.max_radius:
            object.__setattr__(self, "max_radius", _cos_radius_cap(self.pair))

    @property
    def omega(self) -> complex:
        return complex(self.pair.K, -self.pair.Kp)

    def _f(self, z):
        return TWO_OVER_SQRT_PI * np.cos(np.sqrt(z) * self.omega / 2.0)

    def f_mp(self, z):
        omega = mpmath.mpc(self.pair.K, -self.pair.Kp)
        return mpmath.mpf(TWO_OVER_SQRT_PI) * mpmath.cos(mpmath.sqrt(z) * omega / 2)

    def known_zeros(self, n_max):
        return zeros_iv(self.pair, n_max)

    def decay_rate(self):
        return min(self.pair.K, self.pair.Kp)


@dataclass(frozen=True, eq=False)
class TildeIV(EntireM):
    """f~(z) = f(z) + i z b(z) for the Ismail-Valent f."""

    pair: EllipticPair
    label: str = "iv-tilde"
    max_radius: float = field(default=0.0)
    kind = "iv-tilde"

    def __post_init__(self):
        if not self.max_radius:
            object.__setattr__(self, "max_radius", _cos_radius_cap(self.pair))

    @property
    def base(self) -> IsmailValent:
        return IsmailValent(self.pair, max_radius=self.max_radius)

    def _f(self, z):
        base = self.base
        fz = base._f(z)
        fbz = np.conj(base._f(np.conj(z)))
        b = 0.5 * (fz + fbz)
        return fz + 1j * z * b

    def f_mp(self, z):
        base = self.base
        fz = base.f_mp(z)
        # On the real axis f_bar = conj(f); saves a complex cosine.
        fbz = mpmath.conj(fz) if isinstance(z, mpmath.mpf) else base.f_bar_mp(z)
        b = (fz + fbz) / 2
        return fz + mpmath.mpc(0, 1) * z * b

    def decay_rate(self):
        return min(self.pair.K, self.pair.Kp)

    def real_features(self, umax):
        # |f~|^2 = b^2 + (d - x b)^2 dips to b^2 where d - x b crosses zero,
        # next to each zero of b; the dip is about 2/(K u^4) wide in u.
        out = []
        for sign, freq in ((1.0, self.pair.K), (-1.0, self.pair.Kp)):
            j = 0
            while (u0 := (2 * j + 1) * math.pi / freq) <= umax:
                out.append((sign * self._dip_center(u0, sign, freq), min(0.5, 2.0 / (freq * u0**4))))
                j += 1
        return sorted(out)

    def _dip_center(self, u0, sign, freq):
        def dt(u):
            return float(np.real(self.bd(sign * u * u)[1]))

        h = 4.0 / (freq * u0 * u0)
        lo, hi = max(u0 - h, 0.5 * u0), u0 + h
        try:
            if dt(lo) * dt(hi) < 0:
                return brentq(dt, lo, hi, xtol=1e-15 * u0)
        except (ValueError, EvaluationRangeError):
            pass
        return u0


@dataclass(frozen=True, eq=False)
class ZeroProduct(EntireM):
    C: complex
    zeros: tuple
    label: str = "zero-product"
    max_radius: float = DEFAULT_RADIUS_CAP
    kind = "zero-product"

    def __post_init__(self):
        object.__setattr__(self, "zeros", tuple(complex(w) for w in self.zeros))
        if any(w == 0 for w in self.zeros):
            raise DomainError("a zero at the origin cannot be written as (1 - z/z_n)")

    def _f(self, z):
        out = np.full(z.shape, complex(self.C))
        for zn in self.zeros:
            out = out * (1.0 - z / zn)
        return out

    def f_mp(self, z):
        out = mpmath.mpc(self.C)
        for zn in self.zeros:
            out *= 1 - z / mpmath.mpc(zn)
        return out

    def known_zeros(self, n_max):
        return list(self.zeros)


def eval_f(f: EntireM, z):
    return f.f(z)


def eval_f_bar(f: EntireM, z):
    """Return conj(f(conj(z)))."""
    return f.f_bar(z)


def split_bd(f: EntireM, z):
    return f.bd(z)


def zeros_iv(pair: EllipticPair, n_max: int) -> list[complex]:
    """Zeros z_n = (2n+1)^2 pi^2 / (K - i K')^2 for n = 0..n_max."""
    if n_max < 0:
        return []
    base = math.pi**2 / complex(pair.K, -pair.Kp) ** 2
    return [(2 * n + 1) ** 2 * base for n in range(n_max + 1)]


def _winding(f: EntireM, point, t_end: float, samples: int) -> float:
    # Total phase change of f along point(t), t in [0, t_end], in turns.
    t = np.linspace(0.0, t_end, samples + 1)
    vals = f.f(point(t))
    for _ in range(60):
        steps = np.angle(vals[1:] / vals[:-1])
        bad = np.nonzero(np.abs(steps) >= 0.5)[0]
        if bad.size == 0:
            return float(np.sum(steps) / (2 * math.pi))
        if t.size > 5_000_000:
            break
        mids = 0.5 * (t[bad] + t[bad + 1])
        t = np.insert(t, bad + 1, mids)
        vals = np.insert(vals, bad + 1, f.f(point(mids)))
    raise DomainError("argument-principle sampling did not resolve the phase")


def count_zeros_lower_half_disk(f: EntireM, radius: float, samples: int = 4000) -> int:
    """Count zeros of f in {|z| < radius, Im z < 0} by the argument principle.

    The contour runs along [-radius, radius] (parametrised by sqrt|x|, which
    matches the sqrt(z) oscillation) and back over the lower semicircle.
    Segments whose phase step exceeds 0.5 rad are bisected until resolved.
    """
    root = math.sqrt(radius)

    def point(t):
        # t in [0, 1]: real leg; t in [1, 2]: lower arc from +radius to -radius
        s = np.where(t <= 1.0, -root + 2.0 * root * t, 0.0)
        leg = np.sign(s) * s * s
        arc = radius * np.exp(-1j * math.pi * (t - 1.0))
        return np.where(t <= 1.0, leg + 0j, arc)

    # Clockwise traversal: the zero count is minus the winding.
    return int(round(-_winding(f, point, 2.0, samples)))


def count_zeros_in_disk(f: EntireM, center: complex, radius: float, samples: int = 256) -> int:
    """Count zeros of f in the open disk |z - center| < radius."""
    return int(round(_winding(f, lambda t: center + radius * np.exp(1j * t), 2 * math.pi, samples)))


@dataclass
class MembershipReport:
    zeros_ok: bool
    decay_samples: list = field(default_factory=list)
    verdict: str = "inconclusive"
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "zeros_ok": self.zeros_ok,
            "decay_samples": [
                {"n": n, "radius": r, "max_abs": v} for n, r, v in self.decay_samples
            ],
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def _zeros_ok(f: EntireM, radius: float, notes: list) -> bool:
    known = f.known_zeros(64)
    if known is not None:
        bad = [w for w in known if not w.imag > 0]
        if bad:
            notes.append(f"{len(bad)} listed zero(s) outside the upper half-plane, e.g. {bad[0]!r}")
        return not bad
    count = count_zeros_lower_half_disk(f, radius)
    if count:
        notes.append(f"argument principle found {count} zero(s) in the lower half-disk |z|<{radius:g}")
        return False
    notes.append(f"no zeros in the closed lower half-disk |z|<={radius:g} (argument principle)")
    return True


def check_membership(f: EntireM, powers=range(6), radii=(1e2, 1e3, 1e4), arc_samples: int = 721):
    """Sampled check of the two defining conditions of class M.

    For every power n and radius R the maximum of |z^n / f(z)| is taken over
    ``arc_samples`` points of the lower semicircle |z| = R, whose endpoints
    are the real points +-R.  The verdict is ``pass`` only when the zero
    condition holds and every sequence decreases strictly with R.
    """
    powers = list(powers)
    radii = [float(r) for r in radii]
    if any(p < 0 for p in powers):
        raise DomainError("powers must be non-negative")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise DomainError("radii must be strictly increasing")

    notes: list[str] = []
    usable = [r for r in radii if r <= f.max_radius]
    if len(usable) < len(radii):
        notes.append(f"radii above the evaluation cap {f.max_radius:.3g} were skipped")
    zeros_ok = _zeros_ok(f, max(usable) if usable else f.max_radius, notes)
    report = MembershipReport(zeros_ok=zeros_ok, notes=notes)

    theta = np.linspace(-math.pi, 0.0, max(int(arc_samples), 3))
    decreasing = True
    for n in powers:
        seq = []
        for r in usable:
            z = r * np.exp(1j * theta)
            with np.errstate(over="ignore"):
                val = float(np.max(np.abs(z**n / f.f(z))))
            report.decay_samples.append((n, r, val))
            seq.append(val)
        if any(b >= a for a, b in zip(seq, seq[1:])):
            decreasing = False

    if not zeros_ok:
        report.verdict = "fail"
    elif isinstance(f, ZeroProduct):
        report.verdict = "inconclusive"
        notes.append("a finite zero product grows polynomially; decay condition cannot hold")
        warnings.warn("membership of a truncated zero product is inconclusive", stacklevel=2)
    elif len(usable) < 2:
        report.verdict = "inconclusive"
    else:
        report.verdict = "pass" if decreasing else "fail"
    return report


def entire_from_config(cfg: dict) -> EntireM:
    """Build an EntireM from ``{"model": ..., "k": ..., "C": [re, im], "zeros": [[re, im], ...]}``."""
    model = cfg.get("model", "iv")
    if model in ("iv", "iv-tilde"):
        if "k" not in cfg:
            raise DomainError(f"model {model!r} requires a modulus k")
        pair = elliptic_pair(cfg["k"])
        return IsmailValent(pair) if model == "iv" else TildeIV(pair)
    if model == "zero-product":
        c = cfg.get("C", [1.0, 0.0])
        zeros = cfg.get("zeros", [])
        try:
            c = complex(c) if isinstance(c, (int, float)) else complex(c[0], c[1])
            return ZeroProduct(c, tuple(complex(a, b) for a, b in zeros))
        except (TypeError, ValueError, IndexError) as exc:
            raise DomainError(f"malformed zero-product configuration: {exc}") from exc
    raise DomainError(f"unknown model {model!r}; expected iv, iv-tilde or zero-product")
