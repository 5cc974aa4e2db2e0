"""Exception types shared across the package."""


class KoszulError(Exception):
    """Base class for every error raised by the package."""


class MathError(KoszulError):
    """A mathematical precondition or certificate failed (CLI exit code 2)."""


class SingularMatrix(MathError):
    pass


class NotSimpleShape(MathError):
    pass


class NotInvertible(MathError):
    pass


class OverlappingSets(MathError):
    pass


class NotKoszulDirection(MathError):
    pass


class InvalidType(MathError):
    pass


class NotBlockCompatible(MathError):
    pass


class NotLiftableShape(MathError):
    pass


class NotNonDegenerate(MathError):
    pass


class H0NotExact(MathError):
    pass


class NotSimple(MathError):
    pass


class ShapeMismatch(MathError):
    pass


class InvalidHNat(MathError):
    pass


class NotStrictified(MathError):
    pass


class MixedTriangularity(MathError):
    pass


class NoTypicalForm(MathError):
    """A simple cube whose generalized type is not a chain; ``signature`` certifies it."""

    def __init__(self, message, signature=None):
        self.signature = signature
        super().__init__(message)


class ParseError(KoszulError):
    """Malformed input text; carries an optional line and column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})"
        super().__init__(message + where)


class UnknownSuite(KoszulError):
    pass


class InvalidParams(KoszulError):
    pass
