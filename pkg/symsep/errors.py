"""
Error hierarchy for the numerical core.

Every error raised by the library derives from SymsepError and also from
ValueError, so callers can catch either:

- **DimensionMismatchError**: matrix/subsystem dimensions do not agree
- **NotHermitianError**: an operator expected to be Hermitian is not
- **LayoutError**: operator basis grouping violates (M-1)N = d^2 - 1
- **ParameterRangeError**: a scalar parameter (t, p, q, lambda, ...) is out of range
- **InvalidStateError**: a matrix is not a density matrix
- **PovmShapeError**: a corollary was given POVMs of the wrong family
- **DegenerateFrameError**: dual frame requested at x = y
- **ProbabilityGridError**: malformed probability grid
- **BracketError**: invalid root-finding bracket
- **StateFormatError**: state JSON cannot be parsed
"""

from __future__ import annotations


class SymsepError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(SymsepError, ValueError):
    pass


class NotHermitianError(SymsepError, ValueError):
    pass


class LayoutError(SymsepError, ValueError):
    pass


class ParameterRangeError(SymsepError, ValueError):
    pass


class InvalidStateError(SymsepError, ValueError):
    pass


class PovmShapeError(SymsepError, ValueError):
    pass


class DegenerateFrameError(SymsepError, ValueError):
    pass


class ProbabilityGridError(SymsepError, ValueError):
    pass


class BracketError(SymsepError, ValueError):
    pass


class StateFormatError(SymsepError, ValueError):
    """Raised when a state file cannot be parsed or validated."""
