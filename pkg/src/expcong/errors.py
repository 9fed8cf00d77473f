"""Exception types shared across the package."""


class ExpCongError(Exception):
    """Base class for all package errors."""


class ParameterError(ExpCongError, ValueError):
    """Inconsistent or malformed parameters (mismatched fields, bad specs)."""


class DomainError(ExpCongError, ValueError):
    """An argument lies outside the domain of the operation (e.g. inverting 0)."""


class CapacityError(ExpCongError):
    """The requested computation exceeds a configured size limit."""
