"""Exception hierarchy shared by all modules."""


class DipolarSqueezeError(Exception):
    """Base class for package errors."""


class DomainError(DipolarSqueezeError, ValueError):
    """An argument lies outside the domain of an operation."""


class ResourceError(DipolarSqueezeError):
    """A dense oracle was asked for a Fock space above its size cap."""


class NumericalError(DipolarSqueezeError, ArithmeticError):
    """A numerical routine failed to converge or produced an unusable result."""
