class ChebycheckError(ValueError):
    """Base class for every error raised by chebycheck."""


class DomainError(ChebycheckError):
    """An argument lies outside the domain an operation is defined on."""


class UsageError(ChebycheckError):
    """An operation was called with hypotheses that do not hold (tags, directions, ranges)."""


class CurvatureError(UsageError):
    """An outer function M does not have the curvature an operation needs."""


class ConfigError(ChebycheckError):
    """A settings file, campaign config or environment override is invalid."""


class InvariantError(ChebycheckError):
    """Input data violates a type invariant (monotonicity, positivity, ...)."""
