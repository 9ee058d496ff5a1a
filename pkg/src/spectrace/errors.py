"""Exception types shared across the package."""


class SpectraceError(Exception):
    """Base class for all package errors."""


class DomainError(SpectraceError, ValueError):
    """An argument lies outside the region where the quantity is defined."""


class NonConvergenceError(SpectraceError, ArithmeticError):
    """An iteration cap or quadrature budget was exhausted before meeting tolerance."""
