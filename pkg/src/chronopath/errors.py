"""Exception types shared across the engine."""


class ChronopathError(Exception):
    """Base class for domain errors (CLI maps these to exit code 1)."""


class ParseError(ChronopathError):
    """Malformed input data; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(ChronopathError):
    """Invalid pipeline or query configuration."""


class QueryError(ChronopathError):
    """Path query precondition violated (e.g. source never highly dynamic)."""


class DatasetMissingError(ChronopathError):
    """A referenced dataset file or id does not exist."""
