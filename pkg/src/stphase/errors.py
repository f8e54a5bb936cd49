"""Exception hierarchy shared by all stphase modules."""


class StphaseError(Exception):
    """Base class for every error raised by this package."""


class ParseError(StphaseError):
    """Base class for errors raised while parsing an expression."""

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)


class ExprSyntaxError(ParseError):
    pass


class UnknownIdentifier(ParseError):
    pass


class VarOutOfRange(ParseError):
    pass


class EvalError(StphaseError):
    """Evaluation left the domain of an arithmetic operation."""


class DomainError(EvalError):
    """Elementary function applied outside its smooth domain."""


class ShapeMismatch(StphaseError):
    pass


class OrderExceeded(StphaseError):
    pass


class DegenerateMatrix(StphaseError):
    pass


class NoConvergence(StphaseError):
    pass


class TooOscillatory(StphaseError):
    pass


class TailTooLarge(StphaseError):
    pass


class ProblemFileError(StphaseError):
    pass
