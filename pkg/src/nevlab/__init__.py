"""Moment-invariant measure families built from class-M entire functions and bounded Pick functions."""

from __future__ import annotations

__version__ = "0.1.0"

from .entire import EntireM, IsmailValent, TildeIV, ZeroProduct, check_membership, entire_from_config
from .errors import (
    CertificateError,
    ContourError,
    ConvergenceError,
    DomainError,
    EvaluationRangeError,
    NearAxisError,
    NevlabError,
    PoleError,
    ToleranceError,
    UnsupportedError,
)
from .measures import MeasureSpec, MomentVector, moments, vanishing_integrals
from .pick import Const, GDelta, LinearTilde, Moebius, PickFn, ShiftCompose, parse_pick
from .quadrature import QuadConfig
from .special import EllipticPair, elliptic_K, elliptic_pair, hyp2f1_half_series
from .transforms import GEvaluator, g_eval

__all__ = [
    "__version__",
    "EntireM", "IsmailValent", "TildeIV", "ZeroProduct", "check_membership", "entire_from_config",
    "NevlabError", "DomainError", "ConvergenceError", "EvaluationRangeError", "PoleError",
    "CertificateError", "UnsupportedError", "NearAxisError", "ContourError", "ToleranceError",
    "MeasureSpec", "MomentVector", "moments", "vanishing_integrals",
    "PickFn", "Const", "GDelta", "ShiftCompose", "LinearTilde", "Moebius", "parse_pick",
    "QuadConfig",
    "EllipticPair", "elliptic_K", "elliptic_pair", "hyp2f1_half_series",
    "GEvaluator", "g_eval",
]
