"""Semantic exception hierarchy shared across the package."""


class SeqppError(Exception):
    """Base class for all library errors."""


class ArgumentError(SeqppError, ValueError):
    """A caller-supplied argument is out of range or malformed."""


class ModelContractError(SeqppError):
    """A model violated one of its declared guarantees."""


class NumericEvaluationError(SeqppError):
    """A density evaluation produced NaN or +inf.

    Carries the offending sequence so the caller can reproduce the issue.
    """

    def __init__(self, message, sequence=None):
        super().__init__(message)
        self.sequence = sequence


class CapacityError(SeqppError):
    """A configured budget or size cap would be exceeded."""


class UnsupportedModeError(SeqppError):
    """The requested computation needs data unavailable in this mode."""


class DegenerateModelError(SeqppError):
    """The density vanishes on the entire requested state space."""


class ConfigError(SeqppError):
    """A configuration file failed strict parsing."""
