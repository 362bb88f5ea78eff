"""Exception hierarchy shared across the toolkit."""


class NewsbalanceError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(NewsbalanceError):
    """Invalid or inconsistent run configuration."""


class DataError(NewsbalanceError):
    """Unreadable or structurally invalid input data."""


class ContractViolation(NewsbalanceError):
    """A caller passed arguments outside an operation's stated domain."""


class DegenerateScoreError(NewsbalanceError):
    """A score is mathematically undefined for the given inputs (e.g. zero spread)."""


class VocabularyError(NewsbalanceError):
    """A required token is missing from an embedding vocabulary."""


class InsufficientAnchorsError(NewsbalanceError):
    """Too few shared anchor tokens to fit an alignment transform."""


class UndefinedProbabilityError(NewsbalanceError):
    """A normalized probability has a zero denominator."""
