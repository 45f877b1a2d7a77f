"""Semantic exception hierarchy.

Public functions raise these instead of bare ValueError/RuntimeError so that
callers (and the command-line front end) can map failures to exit codes
without string matching.
"""


class BornrateError(Exception):
    """Base class for all errors raised by this package."""


class InvalidSpecError(BornrateError, ValueError):
    """A wavefunction spec violates its field contract (wrong kind, non-positive
    scale parameter, malformed table, ...)."""


class DegenerateSpecError(InvalidSpecError):
    """The spec describes an intensity that cannot be normalized (identically
    zero)."""


class TruncationError(InvalidSpecError):
    """The support halfwidth leaves more untruncated tail mass outside the
    window than the truncation tolerance permits."""

    def __init__(self, message, required_halfwidth=None):
        super().__init__(message)
        self.required_halfwidth = required_halfwidth


class DomainError(BornrateError, ValueError):
    """An argument lies outside the mathematical domain of the operation
    (e.g. a quantile probability outside [0, 1])."""


class QuadratureError(BornrateError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class InvalidParameterError(BornrateError, ValueError):
    """A structural parameter is out of range (e.g. a bin count below 1)."""


class DegenerateDataError(BornrateError):
    """The event data cannot support the requested construction (fewer than
    two distinct positions, zero-width sample range, ...)."""


class OuterRegionViolationError(BornrateError):
    """An event lies strictly outside the finite binning region, signalling a
    scheme/data mismatch."""


class InsufficientDataError(BornrateError):
    """Not enough events or usable checkpoints for the requested statistic."""


class EventLogFormatError(BornrateError):
    """An event-log file failed to parse."""

    def __init__(self, message, line_number=None):
        super().__init__(message)
        self.line_number = line_number
