"""Exception types shared across the package."""

from __future__ import annotations


class GraphMismatchError(ValueError):
    """Raised when bit vectors over different graphs are combined."""


class NotACycle(ValueError):
    """An edge set failed cycle recognition.

    ``reason`` is one of ``"empty"``, ``"degree"`` or ``"disconnected"``.
    """

    def __init__(self, reason: str, detail: str = "") -> None:
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}: {detail}" if detail else reason)


class BudgetExceeded(RuntimeError):
    """A search ran past its configured work budget."""

    def __init__(self, what: str, budget: int) -> None:
        self.what = what
        self.budget = budget
        super().__init__(f"{what}: work budget of {budget} exhausted")


class OracleLimitExceeded(RuntimeError):
    """A brute-force oracle was asked to run on a graph that is too large."""


class LemmaViolation(AssertionError):
    """An internal invariant guaranteed by a proven lemma did not hold."""


class ParseError(ValueError):
    """Malformed graph, length or certificate document."""
