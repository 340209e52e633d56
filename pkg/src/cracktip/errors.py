"""Exception hierarchy.

Three families map onto the CLI exit codes: bad input (1), numerical
non-convergence (2) and internal inconsistency (3).
"""

from __future__ import annotations


class CracktipError(Exception):
    exit_code = 3


class InvalidInput(CracktipError, ValueError):
    exit_code = 1


class ConvergenceError(CracktipError, ArithmeticError):
    exit_code = 2


class InvariantViolation(CracktipError):
    exit_code = 3


# input family
class InvalidArgument(InvalidInput):
    pass


class OutOfDomain(InvalidInput):
    pass


class OnCrack(InvalidInput):
    pass


class NotARoot(InvalidInput):
    pass


class SignChange(InvalidInput):
    pass


class DegenerateRange(InvalidInput):
    pass


class InsufficientSamples(InvalidInput):
    pass


class BadProfile(InvalidInput):
    pass


class GridNotSymmetric(InvalidInput):
    pass


class KindMismatch(InvalidInput):
    pass


class DegenerateField(InvalidInput):
    """The field coincides with the subtracted expansion at this level."""


class ResidualTooLarge(InvalidInput):
    """Projection leaves too much unexplained; the expansion level is wrong."""


# convergence family
class NoConvergence(ConvergenceError):
    pass


class QuadratureFailure(ConvergenceError):
    pass


class IllConditioned(ConvergenceError):
    pass


# internal family
class NoSignChange(InvariantViolation):
    """Bracket endpoints do not straddle a root: the residual is defective."""
