"""
Error types for the NOON-passage toolkit.

Every failure raised by the simulator derives from PassageError and from the
builtin exception a caller would naturally catch (ValueError for bad input,
ArithmeticError for degenerate numerics, RuntimeError for integration and
ordering failures). The CLI maps those builtins onto its exit codes.
"""

from typing import Optional


class PassageError(Exception):
    """Base class for all toolkit errors.

    Attributes:
        step_index: Protocol step at which the error surfaced, if any.
    """

    def __init__(self, message: str, step_index: Optional[int] = None):
        super().__init__(message)
        self.step_index = step_index

    def __str__(self) -> str:
        message = super().__str__()
        if self.step_index is not None:
            return f"[step {self.step_index}] {message}"
        return message


class InvalidParametersError(PassageError, ValueError):
    """Physical parameters or call arguments are outside their valid range."""


class CapacityExceededError(PassageError, ValueError):
    """Requested basis is larger than the builder allows."""


class DegeneratePulseError(PassageError, ArithmeticError):
    """A pulse amplitude used as a denominator vanished."""


class DegenerateDarkStateError(PassageError, ArithmeticError):
    """The dark-state normalization K underflowed to zero."""


class DegenerateGapError(PassageError, ArithmeticError):
    """A bright eigenvalue closed onto the dark state."""


class StepTooLargeError(PassageError, RuntimeError):
    """Hermitian integration drifted in norm; rerun with a smaller dt."""


class NumericalFailureError(PassageError, RuntimeError):
    """A linear-algebra routine did not converge."""


class ProtocolOrderError(PassageError, RuntimeError):
    """A protocol step was called out of order."""
