"""Complete elliptic integral of the first kind.

The modulus convention is ``k`` throughout (not the parameter ``m = k**2``):

    K(k) = (pi/2) * 2F1(1/2, 1/2; 1; k**2) = pi / (2 * AGM(1, k'))

with ``k' = sqrt(1 - k**2)``.  The AGM route is used in production; the
Gauss series :func:`hyp2f1_half_series` is kept as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError

__all__ = ["EllipticPair", "elliptic_K", "elliptic_pair", "hyp2f1_half_series"]

SERIES_TERM_CAP = 200_000


def _check_modulus(k: float) -> float:
    k = float(k)
    if not (0.0 < k < 1.0) or math.isnan(k):
        raise DomainError(f"elliptic modulus must lie in (0, 1), got {k!r}")
    return k


def _agm(a: float, b: float) -> float:
    # Quadratic convergence: a handful of steps reach machine precision.
    for _ in range(64):
        if abs(a - b) <= 4e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def elliptic_K(k: float) -> float:
    """Return K(k) for a modulus ``0 < k < 1`` via the arithmetic-geometric mean.

    Raises
    ------
    DomainError
        If ``k`` is not in the open interval (0, 1).
    """
    k = _check_modulus(k)
    # sqrt((1-k)(1+k)) keeps full relative accuracy for k near 1.
    kp = math.sqrt((1.0 - k) * (1.0 + k))
    return math.pi / (2.0 * _agm(1.0, kp))


def hyp2f1_half_series(k2: float, tol: float = 1e-16) -> float:
    """Sum the Gauss series of 2F1(1/2, 1/2; 1; k2) until a term drops below tol.

    Terms are ``((2n)! / (2**(2n) (n!)**2))**2 * k2**n``, generated by the ratio
    ``((2n-1)/(2n))**2 * k2``.  Summation is compensated (``math.fsum``).
    """
    k2 = float(k2)
    if not (0.0 <= k2 < 1.0):
        raise DomainError(f"series argument must lie in [0, 1), got {k2!r}")
    if tol <= 0:
        raise DomainError("tol must be positive")
    terms = [1.0]
    term = 1.0
    n = 0
    while True:
        n += 1
        if n > SERIES_TERM_CAP:
            raise ConvergenceError(
                f"2F1 series did not reach tol={tol:g} in {SERIES_TERM_CAP} terms (k2={k2!r})"
            )
        ratio = (2 * n - 1) / (2 * n)
        term *= ratio * ratio * k2
        terms.append(term)
        if term < tol:
            break
    return math.fsum(terms)


@dataclass(frozen=True)
class EllipticPair:
    """The modulus together with K = K(k) and Kp = K(k')."""

    k: float
    K: float
    Kp: float

    @property
    def kp(self) -> float:
        return math.sqrt((1.0 - self.k) * (1.0 + self.k))

    def swapped(self) -> "EllipticPair":
        return EllipticPair(self.kp, self.Kp, self.K)


def elliptic_pair(k: float) -> EllipticPair:
    k = _check_modulus(k)
    kp = math.sqrt((1.0 - k) * (1.0 + k))
    return EllipticPair(k, elliptic_K(k), elliptic_K(kp))
