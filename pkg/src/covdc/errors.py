"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Dimension mismatch between matrices, vectors or codes."""


class FieldError(ValueError):
    """Objects defined over different fields were combined."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of a function."""


class DivisionByZero(ZeroDivisionError):
    """Inverse of zero requested in GF(q)."""


class ResourceLimit(RuntimeError):
    """An exhaustive enumeration would exceed the configured budget."""


class InfeasibleD(ValueError):
    """A decoding matrix cannot reproduce every demanded column."""
