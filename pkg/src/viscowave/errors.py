"""Exception and warning types shared across the package."""


class ViscowaveError(Exception):
    """Base class for package-specific errors."""


class AccuracyError(ViscowaveError):
    """A numerical routine could not reach the requested accuracy.

    Carries the best available estimate so callers can decide whether the
    achieved accuracy is still usable.
    """

    def __init__(self, message, estimate=None, error_estimate=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate


class InconclusiveError(ViscowaveError):
    """The available data does not determine the requested property."""


class PathologyWarning(UserWarning):
    """A computed quantity is physically meaningless (e.g. negative slowness)."""


class AccuracyWarning(UserWarning):
    """A value was computed in a regime where accuracy degrades."""
