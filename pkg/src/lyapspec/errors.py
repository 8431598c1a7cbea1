"""Exception types shared across the package."""


class LyapSpecError(Exception):
    """Base class for all package errors."""


class InvalidMapError(LyapSpecError, ValueError):
    """Map data violates the expanding full-branch contract."""


class DomainError(LyapSpecError, ValueError):
    """Argument lies outside the mathematical domain of an operation."""


class DegenerateMapError(LyapSpecError):
    """All branch slopes coincide; the requested quantity is not uniquely defined."""


class BracketingError(LyapSpecError):
    """Root bracketing failed; the model is malformed or not expanding."""


class CylinderBudgetError(LyapSpecError):
    """Cylinder enumeration would exceed the configured entry budget."""

    def __init__(self, message, suggested_depth):
        super().__init__(message)
        self.suggested_depth = suggested_depth


class PreconditionError(LyapSpecError, ValueError):
    """A documented precondition of an operation was violated."""


class InconclusiveError(LyapSpecError):
    """The requested certificate is not defined at this point."""
