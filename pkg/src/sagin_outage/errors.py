"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid or inconsistent configuration value; message names the offending key."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class NumericError(RuntimeError):
    """A numerical procedure failed to converge.

    Carries optional diagnostics (partial sums, truncation state) so callers
    can report what was achieved before the failure.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
