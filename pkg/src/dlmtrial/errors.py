"""Exception types shared across the package."""


class DlmTrialError(Exception):
    """Base class for package-specific failures."""


class ConfigError(DlmTrialError, ValueError):
    """Invalid model or trial configuration (bad dimension, bad parameter)."""


class NumericError(DlmTrialError, ArithmeticError):
    """A computation produced a non-finite or otherwise unusable value.

    Raised instead of clamping: a silently repaired replication would
    corrupt Monte Carlo statistics.
    """


class InsufficientData(DlmTrialError):
    """Not enough observations yet for the statistic; caller should continue."""


class DegenerateData(DlmTrialError):
    """Observed data admit no variance estimate (e.g. zero pooled variance)."""
