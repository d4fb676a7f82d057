"""Exception hierarchy shared by all modules.

The CLI maps these onto exit statuses, so every failure mode that a user can
trigger from the command line should raise one of them.
"""


class HolevoError(Exception):
    """Base class for errors raised by this package."""


class InvalidArgumentError(HolevoError, ValueError):
    """An argument violates a documented precondition."""


class InvalidDistributionError(InvalidArgumentError):
    """A probability vector does not sum to one."""


class ResourceLimitError(HolevoError, RuntimeError):
    """A requested computation exceeds a configured size cap."""


class NumericalFailureError(HolevoError, ArithmeticError):
    """An iterative numerical routine failed to converge.

    ``residual`` carries the last convergence measure, when one exists.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class PSDViolationError(NumericalFailureError):
    """A density matrix has an eigenvalue below the roundoff clamp."""
