"""Exception types raised across the package."""


class NetDiscordError(Exception):
    """Base class for all package errors."""


class InvalidNetworkError(NetDiscordError, ValueError):
    pass


class NormalizationError(NetDiscordError, ValueError):
    """A weighted graph cannot be scaled to a symmetric row-stochastic matrix."""


class ConvergenceError(NetDiscordError, RuntimeError):
    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class PreconditionError(NetDiscordError, ValueError):
    pass


class ConsistencyError(NetDiscordError, RuntimeError):
    """Two independent computations of the same quantity disagree."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class BlissPointError(NetDiscordError, ValueError):
    """The benevolent planner's budget reaches zero miscoordination."""

    def __init__(self, message, bliss_delta=None):
        super().__init__(message)
        self.bliss_delta = bliss_delta


class VerificationError(NetDiscordError, AssertionError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
