"""Exception and warning types shared across the package."""


class UnivalenceLabError(Exception):
    """Base class for all package errors."""


class DomainError(UnivalenceLabError):
    """An argument left the domain an operation is defined on."""


class HypothesisViolation(UnivalenceLabError):
    """A hypothesis of the criterion/operator being evaluated does not hold."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DerivativeVanishes(HypothesisViolation):
    """f'(z) = 0 at a scanned point; carries the witness z."""


class SingularPowerError(UnivalenceLabError):
    """0 raised to a power with non-positive real part."""


class SingularPathError(UnivalenceLabError):
    """A branch-tracked path passes through 0."""


class UndersampledPathError(UnivalenceLabError):
    """Adjacent path samples differ in argument by pi or more."""


class TransferPoleError(UnivalenceLabError):
    """Denominator of the transfer function w vanished."""


class DegeneratePointError(UnivalenceLabError):
    """Both derivative magnitudes too small to form a meaningful residual."""


class ConvergenceError(UnivalenceLabError):
    """An iterative scheme (quadrature panels, 2F1 series) did not converge."""


class InconclusiveError(UnivalenceLabError):
    """A sampling-based check cannot decide (point too close to a curve,
    curve undersampled)."""


class ConfigError(ValueError, UnivalenceLabError):
    """Invalid problem configuration; message carries the field path."""


class TruncationWarning(UserWarning):
    """Series tail bound exceeded at the evaluation radius; values past the
    certified radius are approximate."""
