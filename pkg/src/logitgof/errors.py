"""Exception hierarchy. The CLI maps these to exit codes."""


class LogitgofError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(LogitgofError):
    """Bad usage or experiment configuration (CLI exit code 1)."""


class DataError(LogitgofError):
    """Dataset validation or parsing failure (CLI exit code 2)."""


class NumericalError(LogitgofError):
    """Numerical failure inside fitting or simulation (CLI exit code 3)."""
