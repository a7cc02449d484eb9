"""Exception hierarchy.

The CLI maps :class:`ValidationError` to exit code 1 and
:class:`SolverError` to exit code 2.
"""

from __future__ import annotations


class TranscostError(Exception):
    pass


class ValidationError(TranscostError, ValueError):
    """Input violates a model invariant.

    ``diagnostics`` holds one message per violation.
    """

    def __init__(self, diagnostics):
        if isinstance(diagnostics, str):
            diagnostics = [diagnostics]
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


class InfeasiblePairError(ValidationError):
    pass


class EmptyFeasibleSetError(ValidationError):
    pass


class ShapeMismatchError(ValidationError):
    pass


class SolverError(TranscostError):
    pass


class CapExceededError(SolverError):
    pass


class IllPosedError(SolverError):
    """Request has no well-defined answer, e.g. balanced design with tied optima."""


class DegenerateGridError(IllPosedError):
    pass
