"""Certified beta-expansions and parameter-space cylinders."""

from .errors import (
    BetacylError,
    DegenerateLowerEndpoint,
    EmptyWord,
    InvalidRange,
    NotSelfAdmissible,
    OutOfRange,
    ParseError,
    PrecisionExhausted,
    RootBelowOne,
    ScheduleTooSmall,
)
from .kernels import BACKEND
from .numerics import BetaSpec, Ordering, RealEnclosure, compare, parry_poly_root, refine

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BetaSpec",
    "BetacylError",
    "DegenerateLowerEndpoint",
    "EmptyWord",
    "InvalidRange",
    "NotSelfAdmissible",
    "Ordering",
    "OutOfRange",
    "ParseError",
    "PrecisionExhausted",
    "RealEnclosure",
    "RootBelowOne",
    "ScheduleTooSmall",
    "compare",
    "parry_poly_root",
    "refine",
]
