"""Exception hierarchy shared across the package."""


class EntropyLabError(Exception):
    """Base class for errors raised by entropy_lab."""


class ValidationError(EntropyLabError, ValueError):
    """An input violates a numerical invariant (shape, sum, positivity, ...)."""


class DocumentError(EntropyLabError, ValueError):
    """A JSON document is malformed or missing required fields."""


class CapExceededError(EntropyLabError):
    """A resource guard was hit: word count, matrix dimension, or enumeration size."""


class InequalityViolationError(EntropyLabError):
    """An internally checked entropy identity or inequality failed beyond tolerance."""
