"""Error types shared across the package."""


class PogorelovError(Exception):
    """Base class for all package errors."""


class ParameterError(PogorelovError, ValueError):
    """A constructor or operation parameter is outside its admissible range."""


class DomainError(PogorelovError, ValueError):
    """An evaluation point lies outside the domain of the object."""


class ConfigurationError(PogorelovError, ValueError):
    """A resolution or sampling configuration is unusable."""


class ConsistencyError(PogorelovError, RuntimeError):
    """An internal invariant failed; indicates a bug, not bad input."""


class SingularEvaluationError(PogorelovError, ZeroDivisionError):
    """A denominator vanished where the formula is expected to be regular."""


class CaseRejectedError(PogorelovError, ValueError):
    """A candidate case violates a hypothesis of the check being run.

    The message names the violated hypothesis.
    """


class GeneratorExhaustedError(PogorelovError, RuntimeError):
    """Rejection sampling failed to produce enough valid cases."""
