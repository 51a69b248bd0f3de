"""Exception hierarchy shared by all modules."""


class Dsi1dError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(Dsi1dError, ValueError):
    """Inputs violate a documented precondition."""


class CoincidenceError(ValidationError):
    """Two or more particles sit on the coincidence locus."""


class DegenerateInputError(ValidationError):
    """Total coincidence: every relative coordinate vanishes."""


class ChannelMismatchError(ValidationError):
    """An angular channel does not solve the quantization condition of a coupling pair."""


class NumericalRangeError(Dsi1dError, ArithmeticError):
    """Arguments fall outside the supported numerical range."""


class OverflowRangeError(NumericalRangeError, OverflowError):
    pass


class UnderflowRangeError(NumericalRangeError):
    pass


class ConvergenceError(Dsi1dError, RuntimeError):
    """An iterative procedure failed to reach its tolerance."""


class BracketExhaustedError(ConvergenceError):
    """Root bracketing scanned its interval without isolating the requested root."""

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class InsufficientLevelsError(ConvergenceError):
    """Fewer bound levels than requested lie inside the scaling window."""
