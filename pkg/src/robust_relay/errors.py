"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when an operation receives malformed numerical input."""


class InvalidConfigError(ValueError):
    """Raised when a system configuration violates its invariants."""
