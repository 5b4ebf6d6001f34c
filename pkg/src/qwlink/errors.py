"""Exception types shared across the package."""


class QwlinkError(Exception):
    """Base class for errors raised by this package."""


class EdgeListParseError(QwlinkError, ValueError):
    """Malformed edge-list input; carries the offending line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class NumericalError(QwlinkError, ArithmeticError):
    """A numeric routine failed or produced out-of-tolerance output."""


class MetricUndefinedError(QwlinkError, ValueError):
    """A requested metric is undefined for the given inputs."""
