"""Exception types shared across the package."""


class InvalidStateError(ValueError):
    """A matrix or parameter set violates a density-matrix invariant."""


class InvalidInputError(ValueError):
    """Malformed user input: bad file, bad flag value, bad grid."""


class DataQualityError(ValueError):
    """Ingested data is too far from physical to trust after projection."""


class OptimizationError(RuntimeError):
    """The measurement optimizer returned an inconsistent result."""
