"""Exact arithmetic for linear maps on the moduli space of triangle shapes."""

from .atm import Atm, ClassificationFailure, FailureReason, catalog, classify, make_atm
from .moduli import CanonicalShape, canonicalize, point_group_order

__all__ = [
    "Atm",
    "CanonicalShape",
    "ClassificationFailure",
    "FailureReason",
    "canonicalize",
    "catalog",
    "classify",
    "make_atm",
    "point_group_order",
]
