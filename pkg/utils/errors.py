"""
Exception hierarchy for the symplectic spectrum toolkit.

Library code raises these; only the command-line front end catches them and maps
each family to an exit code.
"""

from typing import List, Optional


class SympSpecError(ValueError):
    """Base class for every error raised by this package."""

    exit_code = 1


# Input errors (exit 2)

class InputError(SympSpecError):
    """Malformed input: files, formulas, schedules, dimensions."""

    exit_code = 2


class DimensionError(InputError):
    """Matrix shapes do not fit the requested operation."""


class MatrixFormatError(InputError):
    """Matrix CSV could not be parsed strictly."""


class ExprSyntaxError(InputError):
    """Sequence formula failed to parse."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class SpecFormatError(InputError):
    """Operator spec document failed validation."""

    def __init__(self, message: str, errors: Optional[List[str]] = None):
        self.errors = list(errors or [])
        if self.errors:
            message = f"{message}: " + "; ".join(self.errors)
        super().__init__(message)


class ScheduleError(InputError):
    """Truncation schedule is empty, unordered or too long."""


# Precondition errors (exit 3)

class PreconditionError(SympSpecError):
    """Input parsed fine but violates a mathematical precondition."""

    exit_code = 3


class NotSymmetricError(PreconditionError):
    pass


class NotPositiveDefiniteError(PreconditionError):
    pass


class CommutationError(PreconditionError):
    pass


class NotSymplecticError(PreconditionError):
    pass


class Block2x2ConstraintError(PreconditionError):
    """Block entry a_k fell outside (0, 1)."""


# Numerical errors (exit 4)

class NumericalError(SympSpecError):
    """A computation broke down numerically."""

    exit_code = 4


class NonConvergenceError(NumericalError):
    pass


class PairingError(NumericalError):
    """Symplectic eigenvalue candidates did not group into matching pairs."""


class DegeneracyError(NumericalError):
    """Canonical 2x2 blocks of the skew form could not be resolved."""


class EvaluationError(NumericalError):
    """Formula evaluation hit a division by zero or a non-finite value."""
