"""Exceptions shared by the solver modules."""


class SolverError(Exception):
    """Base class for solver outcomes that are not a solution."""


class Infeasible(SolverError):
    """No solution exists for this construction (proved by a necessary condition or exhausted search)."""


class BudgetExhausted(SolverError):
    """The time or node budget ran out before the search finished."""


class PatternMiss(SolverError):
    """The pattern table has no entry for this cycle type."""


class Unsupported(SolverError):
    """None of the implemented constructions applies to this instance."""


class KnownUnsolvable(SolverError):
    """The instance is one of the four cycle types with no solution."""


class WrongResidue(ValueError):
    """The order is not in the residue class a solver handles."""
