"""Pick functions, the bounded-image subclass P_b, and the w-transform.

A Pick function maps the upper half-plane into itself.  The subclass P_b
holds those with continuous boundary values on the real line whose image
closure is a bounded subset of the open upper half-plane.  Membership in P_b
is certified constructively by :func:`w_bound`: a number delta < 1 with
``|w(z)| <= delta`` on the closed upper half-plane, where

    w(z) = (1 + i phi(z)) / (1 - i phi(z)).

Config grammar (see :func:`parse_pick`)::

    const:t,gamma | gdelta:delta | shift:delta:<inner> | tilde:slope
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CertificateError, DomainError, PoleError

__all__ = [
    "PickFn",
    "Const",
    "GDelta",
    "ShiftCompose",
    "LinearTilde",
    "Moebius",
    "WBound",
    "PickSyntaxError",
    "eval_phi",
    "to_w",
    "from_w",
    "w_bound",
    "g_delta_map",
    "parse_pick",
    "image_disk",
]

MAX_GRAMMAR_DEPTH = 4
SAMPLED_INFLATION = 1.1

# Cayley map phi -> (1 + i phi)/(1 - i phi) as a 2x2 matrix.
_CAYLEY = np.array([[1j, 1.0], [-1j, 1.0]])


def _mobius(m, z):
    return (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])


def image_disk(m) -> tuple[complex, float] | None:
    """Center and radius of the image of the extended real line under ``m``.

    Returns None when the image is a straight line (pole on the real line or
    at infinity).
    """
    m = np.asarray(m, dtype=complex)
    c, d = m[1, 0], m[1, 1]
    if c == 0 or abs((-d / c).imag) < 1e-300:
        return None
    p = [complex(_mobius(m, x)) for x in (-1.0, 0.0, 1.0)]
    a, b, cc = p
    # Circumcenter of three points in the complex plane.
    den = 2j * ((b - a).conjugate() * (cc - a)).imag
    center = a + ((abs(b - a) ** 2) * (cc - a) - (abs(cc - a) ** 2) * (b - a)) / den
    return center, abs(a - center)


@dataclass(frozen=True)
class WBound:
    delta_bound: float
    method: str

    def __post_init__(self):
        if not (0.0 <= self.delta_bound < 1.0):
            raise CertificateError(f"delta_bound {self.delta_bound!r} is not in [0, 1)")


class PickFn:
    """Base class for Pick functions evaluable on the closed upper half-plane."""

    in_Pb: bool = False

    def _eval(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, z):
        zz = np.asarray(z)
        # Long double input stays long double (used by the extended quadrature).
        zz = zz.astype(np.clongdouble if zz.dtype in (np.longdouble, np.clongdouble) else complex)
        if np.any(zz.imag < 0):
            raise DomainError("Pick functions are evaluated on Im z >= 0 only")
        out = self._eval(zz)
        if np.ndim(z) == 0:
            return out[()] if out.dtype == np.clongdouble else complex(out)
        return out

    def eval_scalar(self, z):
        """Evaluate at one point; arithmetic only, so mpmath numbers pass through."""
        raise NotImplementedError

    def matrix(self):
        """2x2 coefficient matrix when phi is a single fractional-linear map."""
        return None

    @property
    def spec(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Const(PickFn):
    t: float
    gamma: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise DomainError(f"const Pick value needs gamma > 0, got {self.gamma!r}")

    in_Pb = True

    @property
    def value(self) -> complex:
        return complex(self.t, self.gamma)

    def _eval(self, z):
        return np.full(z.shape, self.value)

    def eval_scalar(self, z):
        return self.value

    @property
    def spec(self):
        return f"const:{self.t!r},{self.gamma!r}"


@dataclass(frozen=True)
class GDelta(PickFn):
    """g_delta(z) = -1/(i delta - 1/(z + i delta))."""

    delta: float

    def __post_init__(self):
        if not self.delta > 0:
            raise DomainError(f"gdelta needs delta > 0, got {self.delta!r}")

    in_Pb = True

    def _eval(self, z):
        return g_delta_map(self.delta, z)

    eval_scalar = _eval

    def matrix(self):
        dl = self.delta
        return np.array([[-1.0, -1j * dl], [1j * dl, -(dl * dl) - 1.0]])

    @property
    def spec(self):
        return f"gdelta:{self.delta!r}"


@dataclass(frozen=True)
class ShiftCompose(PickFn):
    """z -> g_delta(inner(z + i delta)): the P_b regulariser of any Pick function."""

    delta: float
    inner: PickFn

    def __post_init__(self):
        if not self.delta > 0:
            raise DomainError(f"shift needs delta > 0, got {self.delta!r}")

    in_Pb = True

    def _eval(self, z):
        return g_delta_map(self.delta, self.inner._eval(z + 1j * self.delta))

    def eval_scalar(self, z):
        return g_delta_map(self.delta, self.inner.eval_scalar(z + 1j * self.delta))

    @property
    def spec(self):
        return f"shift:{self.delta!r}:{self.inner.spec}"


@dataclass(frozen=True)
class LinearTilde(PickFn):
    """phi(z) = slope * (z + i).  A Pick function with unbounded image."""

    slope: float

    def __post_init__(self):
        if not self.slope > 0:
            raise DomainError(f"tilde needs slope > 0, got {self.slope!r}")

    in_Pb = False

    def _eval(self, z):
        return self.slope * (z + 1j)

    eval_scalar = _eval

    def matrix(self):
        return np.array([[self.slope, 1j * self.slope], [0.0, 1.0]])

    @property
    def spec(self):
        return f"tilde:{self.slope!r}"


class Moebius(PickFn):
    """phi(z) = (a z + b)/(c z + d), certified at construction.

    Accepted inputs are maps that send the closed upper half-plane onto a
    closed disk; the map is in P_b when that disk lies strictly inside the
    upper half-plane, and merely Pick when it touches the real line.
    """

    def __init__(self, a, b, c, d):
        self._m = np.array([[a, b], [c, d]], dtype=complex)
        if abs(np.linalg.det(self._m)) == 0:
            raise DomainError("degenerate Moebius map (zero determinant)")
        disk = image_disk(self._m)
        if disk is None:
            raise DomainError("image of the real line is unbounded; not supported")
        center, radius = disk
        inside = abs(complex(_mobius(self._m, 1j)) - center) < radius
        if not inside or center.imag - radius < -1e-14 * max(1.0, abs(center)):
            raise DomainError("map does not send the upper half-plane into itself")
        self.in_Pb = bool(center.imag - radius > 0)

    def __repr__(self):
        a, b, c, d = self._m.ravel()
        return f"Moebius({a!r}, {b!r}, {c!r}, {d!r})"

    def _eval(self, z):
        return _mobius(self._m, z)

    def eval_scalar(self, z):
        a, b, c, d = (complex(v) for v in self._m.ravel())
        return (a * z + b) / (c * z + d)

    def matrix(self):
        return self._m.copy()

    @property
    def spec(self):
        return "moebius:" + ",".join(f"{complex(v)!r}" for v in self._m.ravel())


def g_delta_map(delta: float, z):
    """The disk-valued regulariser g_delta(z) = -1/(i delta - 1/(z + i delta))."""
    return -1.0 / (1j * delta - 1.0 / (z + 1j * delta))


def eval_phi(phi: PickFn, z):
    return phi(z)


def to_w(phi: PickFn, z):
    """w(z) = (1 + i phi(z))/(1 - i phi(z))."""
    p = np.asarray(phi(z))
    den = 1.0 - 1j * p
    if np.any(den == 0):
        raise PoleError("phi(z) = -i: not the value of a Pick function")
    out = (1.0 + 1j * p) / den
    if np.ndim(out) == 0:
        return out[()] if out.dtype == np.clongdouble else complex(out)
    return out


def from_w(w):
    """phi = i (1 - w)/(1 + w), inverse of the w-transform."""
    ww = np.asarray(w, dtype=complex)
    if np.any(ww == -1):
        raise PoleError("w = -1 has no preimage")
    out = 1j * (1.0 - ww) / (1.0 + ww)
    return complex(out) if np.ndim(out) == 0 else out


def _sample_grid() -> np.ndarray:
    pos = np.logspace(-3, 6, 60)
    xs = np.concatenate([-pos[::-1], [0.0], pos])
    ys = np.concatenate([[0.0], pos])
    return (xs[None, :] + 1j * ys[:, None]).ravel()


def w_bound(phi: PickFn) -> WBound:
    """Certificate delta < 1 with |w| <= delta on the closed upper half-plane."""
    if not phi.in_Pb:
        raise CertificateError(f"{phi!r} is not in P_b: |w(x)| is not bounded away from 1")
    if isinstance(phi, Const):
        return WBound(abs(complex(to_w(phi, 0.0))), "exact-moebius-disk")
    m = phi.matrix()
    if m is not None:
        center, radius = image_disk(_CAYLEY @ m)
        return WBound(abs(center) + radius, "exact-moebius-disk")
    if isinstance(phi, ShiftCompose):
        sup = float(np.max(np.abs(to_w(phi, _sample_grid()))))
        inflated = SAMPLED_INFLATION * sup
        if inflated < 1.0:
            return WBound(inflated, "sampled")
        # The outer g_delta alone already confines w to its image disk.
        return w_bound(GDelta(phi.delta))
    raise CertificateError(f"no certificate available for {phi!r}")


class PickSyntaxError(DomainError):
    def __init__(self, text: str, pos: int, reason: str):
        super().__init__(f"{reason} at position {pos} in pick spec {text!r}")
        self.text = text
        self.pos = pos


def _floats(text, body, offset, count):
    parts = body.split(",")
    if len(parts) != count:
        raise PickSyntaxError(text, offset, f"expected {count} comma-separated number(s)")
    out = []
    pos = offset
    for part in parts:
        try:
            out.append(float(part))
        except ValueError:
            raise PickSyntaxError(text, pos, f"not a number: {part!r}") from None
        pos += len(part) + 1
    return out


def parse_pick(text: str, _depth: int = 0, _offset: int = 0, _full: str | None = None) -> PickFn:
    """Parse ``const:t,gamma | gdelta:delta | shift:delta:<inner> | tilde:slope``."""
    full = text if _full is None else _full
    if _depth >= MAX_GRAMMAR_DEPTH:
        raise PickSyntaxError(full, _offset, f"nesting deeper than {MAX_GRAMMAR_DEPTH}")
    head, sep, rest = text.partition(":")
    if not sep:
        raise PickSyntaxError(full, _offset, "missing ':' after the pick kind")
    body_at = _offset + len(head) + 1
    try:
        if head == "const":
            t, gamma = _floats(full, rest, body_at, 2)
            return Const(t, gamma)
        if head == "gdelta":
            (delta,) = _floats(full, rest, body_at, 1)
            return GDelta(delta)
        if head == "tilde":
            (slope,) = _floats(full, rest, body_at, 1)
            return LinearTilde(slope)
        if head == "shift":
            dtext, sep2, inner = rest.partition(":")
            if not sep2:
                raise PickSyntaxError(full, body_at, "shift needs an inner pick spec")
            (delta,) = _floats(full, dtext, body_at, 1)
            inner_fn = parse_pick(inner, _depth + 1, body_at + len(dtext) + 1, full)
            return ShiftCompose(delta, inner_fn)
    except PickSyntaxError:
        raise
    except DomainError as exc:
        raise PickSyntaxError(full, body_at, str(exc)) from None
    raise PickSyntaxError(full, _offset, f"unknown pick kind {head!r}")

