"""Exception hierarchy shared by every module."""


class SendovError(Exception):
    """Base class for all package errors."""


class DomainError(SendovError, ValueError):
    """An argument falls outside the precondition interval of an operation."""


class DegreeOverflowError(DomainError):
    """A polynomial has larger degree than the ambient space allows."""


class InvalidRowError(DomainError):
    """The constant K is not above 1, so no degree threshold exists."""


class ThresholdOverflowError(SendovError):
    """An integer threshold scan ran past its cap."""


class ConvergenceError(SendovError, RuntimeError):
    """An iterative method exhausted its budget."""


class RejectionBudgetError(SendovError):
    """A rejection sampler accepted too few candidates."""
