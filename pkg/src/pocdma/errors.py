"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PreconditionError(ValueError):
    """An operation was called on an object that does not meet its contract
    (for example, entropy of an unconverged saddle solution)."""


class CapacityError(ValueError):
    """Exhaustive enumeration was requested beyond the size guard."""


class NotConvergedError(RuntimeError):
    """A numerical solve failed to reach its tolerance."""
