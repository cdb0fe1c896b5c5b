"""Exception hierarchy shared by all modules.

The CLI maps these onto process exit codes:

    ConfigError  -> 2   (bad or inconsistent configuration)
    DataError    -> 3   (malformed or unusable input data)
    DomainError  -> 4   (value outside the numeric domain of an operation)
"""


class SfwmError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(SfwmError):
    """Invalid configuration: unknown keys, missing files, misaligned models."""


class TopologyError(ConfigError):
    """Circuit graph is cyclic, disconnected or otherwise not evaluable."""


class UsageError(ConfigError):
    """An operation was called with arguments that make no sense (e.g. empty inputs)."""


class DataError(SfwmError):
    """Input data violates its format contract (unsorted timestamps, bad CSV...)."""


class DomainError(SfwmError):
    """Numeric argument outside the mathematical domain of the operation."""
