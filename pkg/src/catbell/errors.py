"""Exception types shared across the package."""


class CatbellError(Exception):
    """Base class for all package-specific errors."""


class CapacityError(CatbellError):
    """A requested dense object exceeds the configured size budget, or a
    truncated basis cannot hold the requested state to tolerance.

    The message names the limit that was hit and, where known, the value
    that would be needed.
    """


class ContractError(CatbellError):
    """A numerical contract was violated (unnormalized input, trace drift,
    loss of unitarity beyond tolerance)."""


class ConfigError(CatbellError):
    """A run configuration failed validation.  The message names the field."""
