"""Exception types shared across the library.

The CLI maps these onto exit codes: InvariantViolation -> 2,
ResourceLimit -> 3, IndeterminateComparison -> 4.
"""


class RadixApproxError(Exception):
    """Base class for library errors."""


class DomainError(RadixApproxError, ValueError):
    """An argument is outside the documented domain of an operation."""


class IndeterminateComparison(RadixApproxError):
    """A comparison between enclosures cannot be decided outside the error radius.

    Raised instead of silently resolving a tie; callers that need a verdict
    should retry at higher precision or switch to exact inputs.
    """


class ResourceLimit(RadixApproxError):
    """An enumeration or search exceeded its configured cap or node budget."""


class InvariantViolation(RadixApproxError):
    """A verified mathematical invariant failed.

    This is never an input error: it means either the implementation or the
    inequality being checked is wrong, and it is always reported with the
    witness that broke it.
    """


class HypothesisViolation(DomainError):
    """A conditional bound was requested but its hypothesis fails.

    Carries the least counterexample in ``counterexample``.
    """

    def __init__(self, message: str, counterexample: int):
        super().__init__(message)
        self.counterexample = counterexample
