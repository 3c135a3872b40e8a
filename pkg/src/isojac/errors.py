"""Exception hierarchy.

Every failure mode raised by the library derives from :class:`IsojacError`.
The ``exit_code`` attribute is what the command line front end returns when
the exception escapes a subcommand.
"""


class IsojacError(Exception):
    exit_code = 1


class AlgebraMismatch(IsojacError, TypeError):
    """Arithmetic between elements of two different algebras."""


class NonUnit(IsojacError, ZeroDivisionError):
    pass


class NoSquareRoot(IsojacError, ValueError):
    pass


class NoPadeSolution(IsojacError):
    pass


class AccuracyTooLow(IsojacError):
    pass


class Inconsistent(IsojacError):
    pass


class SingularLift(IsojacError):
    pass


class NonReducible(IsojacError):
    pass


class NotPrincipal(IsojacError):
    pass


class Exhausted(IsojacError):
    pass


class WeierstrassPoint(IsojacError):
    pass


class DivisorMeetsSupport(IsojacError):
    exit_code = 2


class OnDivisor(IsojacError):
    exit_code = 2


class EvaluationFailed(IsojacError):
    """The fast evaluation path hit a support; callers may retry or fall back."""

    exit_code = 2


class NotTorsion(IsojacError):
    exit_code = 4


class NotIsotropic(IsojacError):
    exit_code = 4


class NotMaximal(IsojacError):
    exit_code = 4


class RetryLimit(IsojacError):
    exit_code = 5


class RankDeficient(IsojacError):
    exit_code = 5


class KernelDim(IsojacError):
    exit_code = 5


class NotASquare(IsojacError):
    exit_code = 5


class InfinityNotBranch(IsojacError):
    exit_code = 5


class WrongCount(IsojacError):
    exit_code = 5


class FitFailed(IsojacError):
    exit_code = 5


class SeedNotFound(IsojacError):
    exit_code = 5


class NotTwoPoints(IsojacError):
    exit_code = 5


class NonseparableRoots(IsojacError):
    exit_code = 5


class SingularSystem(IsojacError):
    exit_code = 5


class DegreeBoundViolated(IsojacError):
    exit_code = 5


class CharacteristicTooSmall(IsojacError):
    exit_code = 3


class MalformedInput(IsojacError, ValueError):
    exit_code = 3
