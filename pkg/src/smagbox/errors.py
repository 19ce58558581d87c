"""Exception types shared across the package."""


class SmagboxError(Exception):
    """Base class for errors raised by this package."""


class GridMismatchError(SmagboxError):
    """Two fields that must live on the same grid do not."""


class ShapeError(SmagboxError):
    """An array does not have the shape required by the operation."""


class ConfigError(SmagboxError):
    """A configuration key is missing, unknown, or has an invalid value.

    Carries the offending key so the CLI can point at it.
    """

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"config key '{key}': {message}")


class SnapshotFormatError(SmagboxError):
    """A snapshot or checkpoint file is malformed or truncated."""


class SchemaError(SmagboxError):
    """A data file exists but its header or schema tag does not match."""


class InstabilityError(SmagboxError):
    """The integrator produced a non-finite value (blow-up)."""

    def __init__(self, message: str, t: float = float("nan"), step_index: int = -1):
        self.t = t
        self.step_index = step_index
        super().__init__(message)
