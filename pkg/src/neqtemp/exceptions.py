"""Exception hierarchy.

ValidationError covers malformed inputs (bad shapes, non-Hermitian data,
trace/positivity violations). NumericalError covers failures of otherwise
well-posed computations (degenerate directions, rank deficiency, overflow).
The CLI maps these to exit codes 1 and 2 respectively.
"""


class NeqTempError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(NeqTempError):
    """Input data violates a documented precondition or type invariant."""


class NumericalError(NeqTempError):
    """A numerically ill-posed or failed computation."""


class DegenerateDirectionError(NumericalError):
    """The Hamiltonian direction is undefined (H proportional to the identity)."""


class RankDeficiencyError(NumericalError):
    """An operation requiring a full-rank state received a rank-deficient one."""


class StepTooLargeError(NumericalError):
    """A finite-difference step pushed a state out of the positive cone."""


class UndefinedQuantityError(NumericalError):
    """A derived quantity has no finite value at this point (e.g. F at beta = 0)."""
