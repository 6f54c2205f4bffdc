"""Exception hierarchy shared by the simulators, engines and harness."""


class InvertorError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(InvertorError, ValueError):
    """A simulator, dataset or experiment configuration is inconsistent."""


class DomainError(InvertorError, ValueError):
    """A value lies outside the support or domain of an operation."""


class CoherenceError(InvertorError):
    """A trace's cached states no longer agree with its parameters."""


class DegeneracyError(InvertorError):
    """Every particle weight vanished.

    Attributes
    ----------
    step : int or None
        1-based step at which the population collapsed, when known.
    """

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step
