"""Exception types shared across the library."""


class StackseekError(Exception):
    """Base class for all library faults."""


class DimensionMismatch(StackseekError):
    """Input vector dimensions do not match the problem instance."""


class EvaluationFault(StackseekError):
    """An oracle returned a non-finite value."""


class DomainFault(StackseekError):
    """An oracle was evaluated outside its validity domain."""


class ClassViolationFault(StackseekError):
    """Observed solver behaviour contradicts the declared monotonicity class."""


class ConstructionFault(StackseekError):
    """A problem instance could not be built (e.g. infeasible region)."""


class ConfigError(StackseekError):
    """Experiment configuration is malformed."""
