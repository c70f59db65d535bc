"""Difference-method constructions and verifiers for the Oberwolfach problem."""
from .instances import (
    KNOWN_UNSOLVABLE,
    CycleType,
    CycleTypeError,
    InstanceClass,
    classify,
    enumerate_cycle_types,
    format_cycle_type,
    parse_cycle_type,
)

__version__ = "0.1.0"

__all__ = [
    "KNOWN_UNSOLVABLE",
    "CycleType",
    "CycleTypeError",
    "InstanceClass",
    "classify",
    "enumerate_cycle_types",
    "format_cycle_type",
    "parse_cycle_type",
]
