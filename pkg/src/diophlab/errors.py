"""Exception types shared across the library."""


class DiophLabError(Exception):
    """Base class for library errors."""


class RangeError(DiophLabError, ValueError):
    """An argument lies outside the domain a table or operation covers."""


class ResourceCapError(DiophLabError, RuntimeError):
    """An enumeration or allocation would exceed a configured cap."""


class ContractError(DiophLabError, ValueError):
    """A documented precondition does not hold for the given arguments."""


class ConfigError(DiophLabError, ValueError):
    """A run configuration violates a validation constraint."""
