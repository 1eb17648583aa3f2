"""Exception types shared across the package."""


class RenyiCapError(Exception):
    """Base class for all package errors."""


class DimensionError(RenyiCapError, ValueError):
    """Operand shapes or subsystem dimensions do not match."""


class NotPSDError(RenyiCapError, ValueError):
    """An operator required to be positive semidefinite is not."""


class InvalidStateError(RenyiCapError, ValueError):
    """A density matrix, ensemble, POVM or channel violates its invariants."""


class DomainError(RenyiCapError, ValueError):
    """A scalar parameter lies outside the range an operation accepts."""


class ConvergenceError(RenyiCapError, RuntimeError):
    """A numerical routine failed to converge."""


class RegimeError(DomainError):
    """An operation was called outside the rate regime it is valid for."""


class InvariantViolation(RenyiCapError, AssertionError):
    """A computed quantity broke an inequality that must hold."""
