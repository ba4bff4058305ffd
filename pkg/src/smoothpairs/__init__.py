"""Finite-precision Kummerian and 1-smoothness checks for cyclotomic pro-p pairs."""

from .cocycles import (
    InvalidOrientation,
    LiftObstruction,
    NotACocycle,
    Orientation,
    cocycle_radical,
    cocycle_spaces,
    fox_row,
    kummerian_at,
    prescribe_cocycle,
    theta_eval,
)
from .padics import PrimeCtx, TruncatedInt, TruncatedUnit, reduce, unit_inverse, valuation
from .pairs import (
    CyclotomicPair,
    NotInKernel,
    kummerian_verdict,
    quotient_pair,
    semidirect_pair,
    theta_ab_module,
    theta_abelian_certify,
)
from .presentations import Presentation, Word, parse_word
from .verdicts import Verdict

__all__ = [
    "CyclotomicPair",
    "InvalidOrientation",
    "LiftObstruction",
    "NotACocycle",
    "NotInKernel",
    "Orientation",
    "Presentation",
    "PrimeCtx",
    "TruncatedInt",
    "TruncatedUnit",
    "Verdict",
    "Word",
    "cocycle_radical",
    "cocycle_spaces",
    "fox_row",
    "kummerian_at",
    "kummerian_verdict",
    "parse_word",
    "prescribe_cocycle",
    "quotient_pair",
    "reduce",
    "semidirect_pair",
    "theta_ab_module",
    "theta_abelian_certify",
    "theta_eval",
    "unit_inverse",
    "valuation",
]

__version__ = "0.1.0"
