"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so each class carries one.
"""


class GinoeError(Exception):
    exit_code = 3


class DomainError(GinoeError, ValueError):
    """Argument outside the mathematical domain of the operation."""


class PoleError(DomainError):
    """Evaluation at a pole (e.g. Gamma at a nonpositive integer)."""


class IndeterminateParametersError(DomainError):
    """A hypergeometric term hits 0/0 before the series terminates."""


class NonConvergenceError(GinoeError, ArithmeticError):
    pass


class ExtrapolationUnstableError(NonConvergenceError):
    pass


class TruncationOverflowError(DomainError):
    pass


class InternalInconsistencyError(GinoeError, AssertionError):
    """A cross-check that must hold by construction failed; this is a bug."""

    exit_code = 5


class EigensolverError(NonConvergenceError):
    pass
