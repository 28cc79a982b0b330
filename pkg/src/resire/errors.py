"""Exception types raised by the reconstruction engine."""


class InvalidArgumentError(ValueError):
    """An input violates a documented precondition."""


class UnsupportedConfigurationError(ValueError):
    """The requested algorithm cannot handle this acquisition geometry."""


class UndefinedMetricError(ValueError):
    """A metric has no defined value for the given data (e.g. empty projection)."""


class FormatError(ValueError):
    """A file on disk does not follow the expected layout."""


class DivergenceError(RuntimeError):
    """The iteration produced non-finite or exploding values."""

    def __init__(self, message, iteration):
        super().__init__(message)
        self.iteration = iteration
