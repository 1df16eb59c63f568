"""Exception types raised by the dimension solver."""


class QuasidimError(Exception):
    """Base class for all package errors."""


class RegimeError(QuasidimError, ValueError):
    """Parameter outside the regime requested for it."""


class CriticalCollision(QuasidimError, ArithmeticError):
    """Both inverse branches merged at the critical point."""

    def __init__(self, message, word=None):
        super().__init__(message)
        self.word = word


class LogBranchViolation(QuasidimError, ArithmeticError):
    """A logarithm argument left the right half-plane, so the coding is no longer valid."""

    def __init__(self, message, word=None):
        super().__init__(message)
        self.word = word


class NoConvergence(QuasidimError, ArithmeticError):
    def __init__(self, message, word=None):
        super().__init__(message)
        self.word = word


class BracketFailure(QuasidimError, ArithmeticError):
    """The pressure has no sign change on the widest allowed bracket."""


class NonMonotone(QuasidimError, ArithmeticError):
    """Pressure failed to decrease in s during bisection."""


class NoRealRoot(QuasidimError, ValueError):
    pass


class OutOfRange(QuasidimError, ValueError):
    """Parameter too small for the large-|c| dimension bounds."""


class DegenerateFit(QuasidimError, ValueError):
    pass
