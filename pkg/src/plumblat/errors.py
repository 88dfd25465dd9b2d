"""Exception classes; the CLI maps each to a distinct exit code."""


class PlumblatError(Exception):
    exit_code = 1


class ParseError(PlumblatError, ValueError):
    exit_code = 2


class InsufficientBoxError(PlumblatError):
    exit_code = 3


class SingularFormError(PlumblatError, ArithmeticError):
    exit_code = 4


class NotAComplexError(PlumblatError):
    exit_code = 5


class NotLSpaceError(PlumblatError):
    exit_code = 6


class InexactResolutionError(PlumblatError):
    exit_code = 7


class ComparisonMismatchError(PlumblatError):
    exit_code = 8
