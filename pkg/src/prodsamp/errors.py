"""Exception hierarchy shared across the library.

Every error raised on a documented contract derives from
:class:`ProdsampError`, so the CLI can map any library failure to a
one-line diagnostic and a nonzero exit code.
"""


class ProdsampError(Exception):
    """Base class for all library errors."""


class NonSquareError(ProdsampError, ValueError):
    """A shift matrix is not square."""


class NotSymmetricError(ProdsampError, ValueError):
    """An operation requiring a symmetric shift received an asymmetric one."""


class OutOfRangeError(ProdsampError, IndexError):
    """A node or frequency index lies outside its valid range."""


class TooLargeError(ProdsampError, ValueError):
    """A dense materialization or exhaustive search exceeds its size cap."""


class DimensionMismatchError(ProdsampError, ValueError):
    """Vector or matrix dimensions do not agree."""


class NumericalFailureError(ProdsampError, ArithmeticError):
    """An eigensolver failed to converge or a numerical invariant broke."""


class RankDeficientError(ProdsampError, ValueError):
    """The sample set fails the rank condition for the given support."""


class OversampledPlanError(ProdsampError, ValueError):
    """The sampled basis W is rectangular (m > K) where an inverse is required."""


class InfeasibleError(ProdsampError, RuntimeError):
    """No verifiable sample set was found within the search budget."""


class EmptySupportError(ProdsampError, ValueError):
    """A frequency support with no indices was supplied."""


class BadParamError(ProdsampError, ValueError):
    """An argument is outside its documented domain."""


class ConfigError(ProdsampError, ValueError):
    """An experiment configuration file is malformed or inconsistent."""


class ParseError(ProdsampError, ValueError):
    """A file could not be parsed; carries the 1-based offending line."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MissingNodeError(ProdsampError, ValueError):
    """A signal file does not cover every node exactly once."""


class DuplicateNodeError(ProdsampError, ValueError):
    """A signal file lists some node more than once."""
