"""Exception and warning types shared across the package."""


class AmdynError(Exception):
    """Base class. Every subclass maps to CLI exit code 2 unless noted."""

    exit_code = 2


class ParameterOutOfRange(AmdynError, ValueError):
    pass


class DomainError(AmdynError, ValueError):
    pass


class OutsideDomain(DomainError):
    pass


class NotDisjointType(AmdynError):
    pass


class NotResonant(AmdynError):
    pass


class MismatchedResonance(AmdynError):
    pass


class InvalidRegime(AmdynError):
    pass


class NoRootBracketed(AmdynError):
    exit_code = 3


class InsufficientMass(AmdynError):
    pass


class InsufficientDepth(AmdynError):
    pass


class InsufficientData(AmdynError):
    pass


class ConfigError(AmdynError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class NonconvergenceError(AmdynError):
    exit_code = 3

    def __init__(self, message, distance=None):
        super().__init__(message)
        self.distance = distance


class NonconvergenceWarning(RuntimeWarning):
    def __init__(self, message, distance=None):
        super().__init__(message)
        self.distance = distance


class BoundaryRegimeWarning(RuntimeWarning):
    """Raised as a warning when a computation sits exactly on the rho = eta boundary."""


class PrecisionWarning(RuntimeWarning):
    pass


class IoError(AmdynError):
    pass
