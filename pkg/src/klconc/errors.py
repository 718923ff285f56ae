"""Exception hierarchy for klconc."""


class KlconcError(Exception):
    """Base class for all klconc errors."""


class DimensionMismatchError(KlconcError, ValueError):
    """Two vectors that must share a length do not."""


class InvalidDistributionError(KlconcError, ValueError):
    """A probability vector violates its invariants."""


class DegenerateDistributionError(InvalidDistributionError):
    """A distribution puts all mass on one outcome where that is not allowed."""


class DomainError(KlconcError, ValueError):
    """A scalar argument is outside the domain of the requested quantity."""


class OutOfRegionError(DomainError):
    """The tail bound was queried below its validity threshold ``(k-1)/n``.

    Carries the boundary value so callers can report it.
    """

    def __init__(self, message: str, boundary: float):
        super().__init__(message)
        self.boundary = boundary


class EnumerationTooLargeError(KlconcError):
    """Exhaustive enumeration would exceed the configured atom cap.

    Carries the number of atoms the request would need.
    """

    def __init__(self, message: str, required_cap: int):
        super().__init__(message)
        self.required_cap = required_cap
