"""Exception types raised by homsim.

Every expected failure derives from :class:`HomsimError`, which is what the
command-line front end catches to print a one-line diagnostic.
"""


class HomsimError(Exception):
    """Base class for domain errors."""


class UnknownScenario(HomsimError, ValueError):
    pass


class ParameterMismatch(HomsimError, ValueError):
    pass


class EmptyMixture(HomsimError, ValueError):
    pass


class WeightSumInvalid(HomsimError, ValueError):
    pass


class BadGrid(HomsimError, ValueError):
    pass


class ThetaNotApplicable(HomsimError, ValueError):
    pass


class TruncationOverflow(HomsimError, ValueError):
    pass


class EvaluationError(HomsimError, ArithmeticError):
    pass


class ParseError(HomsimError, ValueError):
    """Circuit source error with a 1-based position into the original text."""

    def __init__(self, line, column, message, token=""):
        self.line = line
        self.column = column
        self.message = message
        self.token = token
        super().__init__(f"{line}:{column}: {message}" + (f" (got {token!r})" if token else ""))
