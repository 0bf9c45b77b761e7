"""Exception hierarchy shared by every module."""


class MoravakError(Exception):
    """Base class for all errors raised by the package."""


class StructuralError(MoravakError, ValueError):
    """Operands live in incompatible series spaces (prime, variables, truncation)."""


class DomainError(MoravakError, ValueError):
    """The operation is undefined for these inputs."""


class NonUnitDivision(DomainError):
    """Division by a series whose lowest term is not a p-local unit monomial."""


class IntegralityError(DomainError):
    """A coefficient that must be p-local has p in its denominator."""


class ConsistencyError(MoravakError, RuntimeError):
    """Two independent computations of the same quantity disagree."""
