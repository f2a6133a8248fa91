"""Exceptions raised by dcshuffle

Every failure named by the toolkit has its own class so callers (and the
CLI exit-status mapping) can tell input problems from budget limits and
from internal bugs.
"""
from typing import List
from typing import Optional


class DcShuffleError(Exception):
    """Base class for all dcshuffle errors"""

    pass


class ConfigError(DcShuffleError):
    """A configuration file could not be read or written"""


class InstanceError(DcShuffleError):
    """An instance could not be parsed or failed validation"""

    def __init__(self, message: str, violations: Optional[List[object]] = None) -> None:
        super().__init__(message)
        self.violations = violations or []


class UndeliverableMessage(InstanceError):
    """A wanted message is held by no sender"""


class DivisibilityError(InstanceError):
    """Family parameters violate a divisibility requirement"""


class UnknownVertex(DcShuffleError):
    """A subset refers to a vertex that is not in the digraph"""


class BudgetExceeded(DcShuffleError):
    """A configured enumeration budget was exhausted"""


class BlowupBudgetExceeded(BudgetExceeded):
    """Fourier-Motzkin elimination exceeded its inequality cap"""


class MissingCoordinate(DcShuffleError):
    """A point does not assign every variable of a system"""


class DimensionCapExceeded(DcShuffleError):
    """Vertex enumeration was asked for a polytope above the dimension cap"""


class UnboundedPolytope(DcShuffleError):
    """Vertex enumeration was asked for an unbounded polyhedron"""


class Unbounded(DcShuffleError):
    """The LP objective is unbounded above"""


class Infeasible(DcShuffleError):
    """The inequality system has no solution"""


class IncompleteChoice(DcShuffleError):
    """A decoding choice does not cover every (receiver, sender) pair"""


class StrategyExhausted(DcShuffleError):
    """No decoding choice of the strategy achieves the target"""

    def __init__(self, message: str, summaries: Optional[List[str]] = None) -> None:
        super().__init__(message)
        self.summaries = summaries or []


class NonuniformCapacity(DcShuffleError):
    """A uniform capacity was required but capacities differ"""


class InvariantViolation(DcShuffleError):
    """An internal invariant failed; this is a bug"""
