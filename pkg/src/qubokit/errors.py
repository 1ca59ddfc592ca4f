"""Exception types shared across the toolkit."""


class QubokitError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(QubokitError, ValueError):
    """Raised when a model, vector, or parameter record is malformed."""


class UnsupportedOrderError(ValidationError):
    """Raised when a polynomial order outside the supported range is requested."""


class SizeCapError(ValidationError):
    """Raised when an exact method is asked for a problem above its size cap."""


class GenerationError(QubokitError, RuntimeError):
    """Raised when an instance generator exhausts its retry budget."""


class ReferenceUndefinedError(QubokitError, ValueError):
    """Raised when an optimality gap is requested against a zero reference energy."""
