"""Exception hierarchy for nevlab."""

from __future__ import annotations


class NevlabError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(NevlabError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(NevlabError, RuntimeError):
    """A series or iteration failed to converge within its term cap."""


class EvaluationRangeError(NevlabError, OverflowError):
    """Evaluation requested beyond the configured safe radius."""


class PoleError(NevlabError, ZeroDivisionError):
    """A fractional-linear map was evaluated at its pole."""


class CertificateError(NevlabError, ValueError):
    """A Pick function has no bounded-image certificate (not in P_b)."""


class UnsupportedError(NevlabError, NotImplementedError):
    """The operation is not available for this representation."""


class NearAxisError(NevlabError, ValueError):
    """A Cauchy transform was requested too close to the real axis."""


class ContourError(NevlabError, RuntimeError):
    """No admissible deformation radius avoids the zeros of f."""


class ToleranceError(NevlabError, RuntimeError):
    """Adaptive quadrature stopped before meeting its tolerance.

    The best available estimate and its error are attached so callers can
    decide whether to report or retry.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
