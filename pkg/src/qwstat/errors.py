"""Exception hierarchy.

Two families: :class:`InputError` for malformed user data (bad coins,
borderline classifications) and :class:`PreconditionError` for calls whose
arguments are well-formed but violate an operation's preconditions.
"""


class QWError(Exception):
    """Base class for all package errors."""


class InputError(QWError, ValueError):
    """User-supplied data is invalid."""


class PreconditionError(QWError, ValueError):
    """An operation was called outside its domain."""


class NotUnitary(InputError):
    """Coin entries violate unitarity beyond tolerance."""


class AmbiguousCase(InputError):
    """Coin sits on the boundary between two classification cases."""


class WrongCase(PreconditionError):
    """Operation requires a different coin case."""


class WindowTooSmall(PreconditionError):
    """Window cannot accommodate the requested light cone or stencil."""


class NotEigenvalue(PreconditionError):
    """Supplied lambda is not one of the admissible eigenvalues."""


class ZeroParameters(PreconditionError):
    """Free parameters A and B are both zero."""


class MissingSequenceValue(PreconditionError):
    """An even-site sequence lacks an entry needed for evaluation."""


class ZeroProduct(PreconditionError):
    """An even-site pair has alpha * beta == 0."""


class ZeroState(PreconditionError):
    """Initial chirality vector has zero norm."""


class NonPositive(PreconditionError):
    """A measure value needed for a logarithmic fit is not positive."""
