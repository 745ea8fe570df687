"""Exception types shared across the package."""


class QwassError(Exception):
    """Base class for all package-specific errors."""


class InputError(QwassError, ValueError):
    """Invalid caller-supplied data (bad matrix, bad dimensions, bad file)."""


class NotHermitianError(InputError):
    pass


class NotPsdError(InputError):
    pass


class NotDensityError(InputError):
    pass


class DimensionMismatchError(InputError):
    pass


class NeitherPureError(InputError):
    """Raised when the pure-state closed form is asked for two mixed states."""


class ObservableNotPsdError(InputError):
    """Raised when the Hellinger bound is asked for a non-PSD observable."""


class OutsideBallError(InputError):
    """Raised when a 3-vector outside the closed unit ball is used as a Bloch vector."""


class SolverFailureError(QwassError, RuntimeError):
    """The interior-point solver did not reach the requested tolerances."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class ConcavityViolationError(QwassError, RuntimeError):
    """Squared divergence came out negative beyond tolerance.

    Analytically impossible, so this signals solver inaccuracy rather than
    a property of the inputs.
    """
