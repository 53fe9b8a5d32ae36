"""Exception hierarchy.

Every error raised on bad input derives from :class:`InputError`; the CLI maps
those to exit code 3.
"""

from __future__ import annotations


class JointChoiceError(Exception):
    """Base class for all library errors."""


class InputError(JointChoiceError, ValueError):
    """Malformed or inconsistent input data."""


class SchemaError(InputError):
    pass


class EmptyMenuSet(InputError):
    pass


class ChoiceOutsideMenu(InputError):
    pass


class EmptyChoice(InputError):
    pass


class DuplicateMenu(InputError):
    pass


class UnknownItem(InputError):
    pass


class UnknownDimension(InputError):
    pass


class ScopeError(InputError):
    pass


class EmptySubset(InputError):
    pass


class TooManyDimensions(InputError):
    pass


class DuplicateMember(InputError):
    pass


class EmptyMember(InputError):
    pass


class InvalidOrder(InputError):
    pass


class InvalidFilter(InputError):
    pass


class MissingBranchValue(InputError):
    pass


class PreconditionError(JointChoiceError):
    """An operation was called on data outside its domain of validity."""


class NotSingleValued(PreconditionError):
    pass


class NotSeparable(PreconditionError):
    pass


class NotSeparablePreference(PreconditionError):
    pass


class CyclicRelation(PreconditionError):
    pass


class FamilyNotSelective(PreconditionError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class LabellingSearchExceeded(JointChoiceError):
    """Raised when a labelling search would exceed the permutation cap."""

    def __init__(self, message: str, dimension: int | None = None, size: int | None = None):
        super().__init__(message)
        self.dimension = dimension
        self.size = size


class InternalError(JointChoiceError):
    """A proven-unreachable state was reached."""


class ReconstructionMismatch(InternalError):
    pass


class InternalSelectivityFailure(InternalError):
    pass
