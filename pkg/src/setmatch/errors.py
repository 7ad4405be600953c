"""Exception types shared across the library."""


class SetMatchError(ValueError):
    """Base class for all setmatch validation errors."""


class DimensionMismatchError(SetMatchError):
    """Feature vectors or sets with incompatible dimensions were combined."""


class InvalidPermutationError(SetMatchError):
    """Permutation is not a bijection or does not match the set size."""


class EmptyInputError(SetMatchError):
    """An operation that requires at least one element received none."""


class UnboundedKernelError(SetMatchError):
    """The kernel has no finite supremum and no sample was provided."""


class CannotRecombineError(SetMatchError):
    """Negative sampling needs at least two positive pairs to recombine."""
