"""Exception hierarchy shared by all qgeom modules."""


class QGeomError(Exception):
    """Base class for every error raised by qgeom."""


class DomainError(QGeomError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ValidationError(QGeomError, ValueError):
    """An object violates a structural invariant (trace, hermiticity, shape...)."""


class UnsupportedError(QGeomError, NotImplementedError):
    """The request is well formed but outside what the operation supports."""


class NumericError(QGeomError, ArithmeticError):
    """A numerical routine failed (non-convergence, non-finite result)."""
