"""Exception hierarchy.

Every failure raised by a construction stage carries the stage name and,
where one exists, a witness object that lets a caller re-check the claim.
"""

from __future__ import annotations

from typing import Any


class SignflowError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(SignflowError, ValueError):
    """Malformed graph, orientation, or vertex/edge reference."""


class ScaleBoundError(SignflowError):
    """An exact routine was asked to run above its enumeration bound."""


class StageError(SignflowError):
    """A construction stage failed.

    ``stage`` names the stage and ``witness`` holds whatever evidence the
    stage produced (a violating vertex set, a partition, an unbalance report).
    """

    def __init__(self, stage: str, message: str, witness: Any = None):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
        self.witness = witness


class HypothesisError(StageError):
    """Input fails the connectivity or unbalance hypotheses."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__("hypotheses", message, witness)


class PackingInfeasibleError(StageError):
    """Fewer than the requested number of edge-disjoint spanning trees exist.

    ``witness`` is a vertex partition (list of frozensets) whose crossing
    edge count is below ``t * (len(partition) - 1)``, or None if not found.
    """

    def __init__(self, message: str, witness: Any = None):
        super().__init__("packing", message, witness)


class NotEulerianError(StageError):
    def __init__(self, message: str, witness: Any = None):
        super().__init__("euler", message, witness)


class BalanceError(StageError):
    def __init__(self, message: str, witness: Any = None):
        super().__init__("balanced", message, witness)


class NotZBoundaryError(StageError):
    def __init__(self, message: str, witness: Any = None):
        super().__init__("orient", message, witness)


class OrientationInfeasibleError(StageError):
    """Exact search proved that no beta-orientation exists."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__("orient", message, witness)


class SearchBudgetError(StageError):
    """Search gave up before deciding feasibility; nothing is proved."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__("orient", message, witness)


class RepairStuckError(StageError):
    """No directed path from V+ to V-; ``witness`` holds Y and Theta(Y)."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__("repair", message, witness)


class InvariantViolation(SignflowError, AssertionError):
    """An internal invariant failed. Always a bug or a false hypothesis."""


class ParseError(SignflowError, ValueError):
    """Malformed graph or certificate text; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class CertificateMismatch(SignflowError):
    """A certificate does not belong to the graph it is checked against."""
