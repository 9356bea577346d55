"""Exception hierarchy shared by all igci modules."""


class IGCIError(ValueError):
    """Base class for every error raised by this package."""


class GridMismatchError(IGCIError):
    pass


class DomainError(IGCIError):
    pass


class InsufficientDataError(IGCIError):
    pass


class DegenerateDataError(IGCIError):
    """Data that makes a score undefined (zero gaps, constant axis, ties).

    ``rows`` holds the offending sample positions (0-based, in input order)
    when they are known, so callers can point at the bad lines of a file.
    """

    def __init__(self, message, rows=()):
        super().__init__(message)
        self.rows = tuple(int(r) for r in rows)


class InvalidGridError(IGCIError):
    pass


class OracleTooLargeError(IGCIError):
    pass


class ExtrapolationError(IGCIError):
    pass


class LatticeCollisionError(IGCIError):
    """Two continuous samples rounded onto the same lattice coordinate."""
