"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a function is defined."""


class DivergenceError(DomainError):
    """The requested quantity is infinite (e.g. Gamma(a, 0) with a <= 0)."""


class ParameterError(ValueError):
    """A parameter set is inconsistent or unsupported."""


class UnsupportedParameterError(ParameterError):
    """A parameter is valid in general but not supported by a closed form here."""


class ConvergenceError(ArithmeticError):
    """A numerical procedure ran out of budget before meeting its tolerance.

    ``error_estimate`` carries the last achieved error estimate and
    ``details`` any per-call diagnostics the caller attached.
    """

    def __init__(self, message, error_estimate=float("nan"), details=None):
        super().__init__(message)
        self.error_estimate = error_estimate
        self.details = details if details is not None else {}


class ConfigError(ValueError):
    """A scenario or sweep configuration file is malformed."""


class BandWarning(UserWarning):
    """A model is evaluated outside the frequency band its fit was built for."""
