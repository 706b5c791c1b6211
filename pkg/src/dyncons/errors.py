"""Exception types shared across the package."""

from __future__ import annotations


class DynconsError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(DynconsError):
    """A state left the admissible domain of a map or vector field.

    ``index`` is the trajectory index at which the offending state would
    have appeared; ``partial`` holds the states computed so far (when the
    error is raised from an iteration loop).
    """

    def __init__(self, message, index=None, partial=None):
        super().__init__(message)
        self.index = index
        self.partial = partial


class NonFiniteError(DynconsError):
    """An overflow or NaN appeared while iterating a map.

    Same ``index`` / ``partial`` attributes as :class:`DomainError`.
    """

    def __init__(self, message, index=None, partial=None):
        super().__init__(message)
        self.index = index
        self.partial = partial


class StepFailure(DynconsError):
    """The adaptive integrator could not make progress (step underflow)."""


class ExistenceError(DynconsError):
    """A requested equilibrium does not exist for the given parameters."""


class ConditionError(DynconsError):
    """Parameter conditions required by an analytical result are violated."""
