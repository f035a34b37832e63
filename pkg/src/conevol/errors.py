"""Exception types raised across the package."""


class ConevolError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(ConevolError, ValueError):
    pass


class ConfigurationError(ConevolError, ValueError):
    """A vector configuration violates its invariants (zero, parallel, non-spanning)."""


class CapExceeded(ConevolError, RuntimeError):
    """An enumeration would exceed its configured size cap."""


class InfeasiblePoint(ConevolError, ValueError):
    """A point lies outside the polytope where membership is required."""


class InconsistencyError(ConevolError, AssertionError):
    """Two independent computations of the same quantity disagree.

    Raised by built-in cross-checks; it signals either a bug or a genuine
    counterexample and should never be silenced.
    """


class InputError(ConevolError, ValueError):
    """A malformed input document; the message names the offending field."""
