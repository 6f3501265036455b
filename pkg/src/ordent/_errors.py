"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """Raised when an argument violates a documented precondition."""


class InputParseError(InvalidArgumentError):
    """Raised when an input file cannot be parsed into finite real series."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceLimitError(RuntimeError):
    """Raised when an exact computation would exceed its interval budget."""
