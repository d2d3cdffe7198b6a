"""Exception taxonomy shared across the package.

Configuration errors cover misuse that is detectable before any serious
arithmetic happens (bad flags, bad dimensions, invalid grids).  Numerical
errors cover failures that surface mid-computation.  The CLI maps the two
families to distinct exit codes.
"""


class ConfigurationError(ValueError):
    """Invalid configuration, argument, or precondition violation."""


class InsufficientTermsError(ConfigurationError):
    """A series operation was asked for more terms than were supplied."""


class NumericalError(ArithmeticError):
    """A computation failed for numerical reasons."""


class DegenerateGuessError(NumericalError):
    """Initial guess has (numerically) zero overlap with the target state."""


class DegenerateOperatorError(NumericalError):
    """A quadratic-form denominator vanished; the basis state is already
    an exact eigenfunction at the current energy estimate."""


class LostStateError(NumericalError):
    """An iterative restart drifted away from the tracked eigenstate."""


class StageFailureError(NumericalError):
    """A continuation stage missed its residual target.

    Carries whatever rows were completed so callers can inspect or emit
    partial results.
    """

    def __init__(self, message: str, partial_rows=None):
        super().__init__(message)
        self.partial_rows = list(partial_rows or [])
