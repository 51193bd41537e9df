"""Exception hierarchy shared by all modules."""


class ModrepError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ModrepError):
    """Arithmetic outside the domain of an operation (inverting zero, singular matrix)."""

    def __init__(self, msg, rank=None):
        super().__init__(msg)
        self.rank = rank


class InputError(ModrepError):
    """Malformed or inconsistent input (degree mismatch, non-subgroup, bad file)."""


class CapExceeded(ModrepError):
    """A configured resource cap was hit; the computation is too large, supply data instead."""


class ComputationFailure(ModrepError):
    """An iteration cap was exhausted without reaching a verdict; never a wrong answer."""


class SplittingFieldError(ModrepError):
    """A composition factor is not absolutely irreducible over the working field.

    Downstream vertex/Green computations refuse to run; extend the field and retry.
    """


class DataError(ModrepError):
    """Shipped or user-supplied fixture data failed validation at load time."""
