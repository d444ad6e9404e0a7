"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Invalid configuration value or operation input.

    ``key`` names the offending field when one can be singled out; the CLI
    surfaces it in its error message.
    """

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


class BehindSurfaceError(ValidationError):
    """Position has z <= 0, so no reflection direction exists."""


class TraceParseError(ValueError):
    """A trace or report file is malformed at a specific line."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class TraceWriteError(OSError):
    """A sink write failed; ``byte_offset`` is where the failing write began."""

    def __init__(self, message: str, byte_offset: int):
        super().__init__(message)
        self.byte_offset = byte_offset
