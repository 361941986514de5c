"""Exception types shared across the package."""


class DataError(Exception):
    """Malformed, missing, or dimensionally inconsistent data."""


class ConfigError(Exception):
    """A parameter violates its documented constraints."""


class InternalError(Exception):
    """An invariant that should be unreachable was violated."""
