"""Exception types raised across the package.

Every error derives from :class:`SeriesInvertError` so callers (and the CLI)
can catch the whole family at once.
"""


class SeriesInvertError(Exception):
    """Base class for all package errors."""


# -- series arithmetic -------------------------------------------------------

class RingMismatch(SeriesInvertError, TypeError):
    """Operands live in different coefficient rings."""


class ZeroConstantTerm(SeriesInvertError, ZeroDivisionError):
    """Division by a series whose constant term is zero."""


class InnerConstantNonzero(SeriesInvertError, ValueError):
    """Composition with an inner series that does not vanish at 0."""


class OrderError(SeriesInvertError, ValueError):
    """A series has too small an order for the requested operation."""


class CoefficientIndexError(SeriesInvertError, IndexError):
    pass


# -- reversion ---------------------------------------------------------------

class NotRevertible(SeriesInvertError, ValueError):
    """f(0) != 0 or f'(0) == 0."""


class InsufficientOrder(SeriesInvertError, ValueError):
    pass


class NonConvergence(SeriesInvertError, RuntimeError):
    """Newton reversion failed to double its trusted order."""


# -- numeric oracle ----------------------------------------------------------

class OracleFailure(SeriesInvertError, RuntimeError):
    """The numeric inverse could not be computed."""


class NoBracket(OracleFailure):
    pass


class MaxIterations(OracleFailure):
    pass


# -- smooth pipeline ---------------------------------------------------------

class DomainTooSmall(SeriesInvertError, ValueError):
    pass


class StepUnderflow(SeriesInvertError, ValueError):
    pass


class IllConditionedJet(SeriesInvertError, ValueError):
    """The linear coefficient of a measured jet is not resolved."""


class WindowsNotNested(SeriesInvertError, ValueError):
    pass


# -- expressions and corpus --------------------------------------------------

class ExpressionSyntaxError(SeriesInvertError, ValueError):
    """Malformed expression text.

    ``offset`` is the byte offset of the offending token and ``expected`` the
    set of tokens that would have been accepted there.
    """

    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = frozenset(expected)
        if self.expected:
            message = f"{message} at offset {offset}; expected one of {sorted(self.expected)}"
        else:
            message = f"{message} at offset {offset}"
        super().__init__(message)


class UnknownFunction(ExpressionSyntaxError):
    pass


class NotExpandable(SeriesInvertError, ValueError):
    """No power series at 0 exists for a subexpression."""

    def __init__(self, message, node=None):
        self.node = node
        super().__init__(message)


class DomainError(SeriesInvertError, ValueError):
    """Expression evaluated outside its real domain."""


class UnknownEntry(SeriesInvertError, LookupError):
    pass
