"""Exception types shared across the package."""


class SpectraError(Exception):
    """Base class for errors raised by spectradim."""


class InvalidInputError(SpectraError, ValueError):
    """A digit, word or parameter is outside its allowed range."""


class UnsupportedOperationError(SpectraError):
    """Arithmetic outside the supported quadratic-field fragment."""


class DeadEndError(SpectraError):
    """No admissible continuation exists (or none was found in the budget)."""


class BudgetExceededError(SpectraError):
    """An iterative enclosure did not reach its tolerance.

    ``partial`` carries the best enclosure obtained before giving up.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class VerificationError(SpectraError):
    """A checked identity or inequality does not hold."""
