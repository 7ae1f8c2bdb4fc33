"""Exception types shared across the package.

Every error raised by this package derives from :class:`RkrpError`, so
callers can catch one base class. The CLI maps subclasses to distinct
exit codes.
"""

from __future__ import annotations


class RkrpError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(RkrpError):
    """Operands have incompatible shapes, or a matrix is malformed."""


class SingularMatrixError(RkrpError):
    """A linear system was declared numerically singular.

    Attributes
    ----------
    pivot_index : int
        1-based index of the pivot whose relative magnitude fell below
        the singularity threshold.
    """

    def __init__(self, message: str, pivot_index: int):
        super().__init__(message)
        self.pivot_index = int(pivot_index)


class PartitionError(RkrpError):
    """A matrix cannot be split as requested (divisibility violated)."""


class ConfigurationError(RkrpError):
    """Invalid code geometry, distribution, or experiment settings."""


class DecodeError(RkrpError):
    """Decoding failed; carries the responder set that produced the system.

    Attributes
    ----------
    responders : tuple[int, ...]
        1-based worker indices whose results fed the failed solve.
    """

    def __init__(self, message: str, responders=()):
        super().__init__(message)
        self.responders = tuple(int(i) for i in responders)


class InfeasiblePatternError(RkrpError):
    """A straggler pattern leaves fewer than K responders."""


class UndefinedMetricError(RkrpError):
    """A metric is undefined for the given inputs (e.g. zero-norm truth)."""


class MatrixIOError(RkrpError):
    """A matrix file is missing, unreadable, or malformed."""
