"""Exception types shared across the package."""

__all__ = ["DomainError", "BranchError", "NonUnitaryError", "ConfigError"]


class DomainError(ValueError):
    """A quantity is evaluated outside its real domain."""


class BranchError(ValueError):
    """A realization was requested on the wrong branch (gamma zero vs nonzero)."""


class NonUnitaryError(ValueError):
    """The structure function is negative inside the representation."""


class ConfigError(ValueError):
    """An invalid job configuration."""
