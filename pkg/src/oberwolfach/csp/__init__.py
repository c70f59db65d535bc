"""Embedded finite-domain constraint engine."""
from .model import (
    AllDifferent,
    Cardinality,
    CspModel,
    Fix,
    HalfPairUse,
    MixedEdgeFlag,
    ModDiffLink,
    ModelError,
    PatternFlag,
    check,
)
from .search import SearchOutcome, SearchStats, Status, solve

__all__ = [
    "AllDifferent",
    "Cardinality",
    "CspModel",
    "Fix",
    "HalfPairUse",
    "MixedEdgeFlag",
    "ModDiffLink",
    "ModelError",
    "PatternFlag",
    "SearchOutcome",
    "SearchStats",
    "Status",
    "check",
    "solve",
]
