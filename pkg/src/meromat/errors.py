"""Exception hierarchy shared by all meromat layers."""


class MeromatError(Exception):
    """Base class for all errors raised by this package."""


class InputError(MeromatError):
    """Malformed user input: bad files, bad expressions, bad dimensions."""


class ParseError(InputError):
    """Syntax error in an entry expression, with a byte offset."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class AnalysisError(MeromatError):
    """A requested analysis could not be completed on valid input."""


class SingularMatrixError(AnalysisError):
    """A matrix required to be regular has identically zero determinant."""


class RankDeficientError(AnalysisError):
    """A stacked matrix does not have the full normal rank the operation needs."""


class NotCoprimeError(AnalysisError):
    """Inputs required to be coprime are not."""


class NoSolutionError(AnalysisError):
    """A matrix equation has no solution; carries the obstructing divisor."""

    def __init__(self, message, gcrd=None):
        super().__init__(message)
        self.gcrd = gcrd


class ContourError(AnalysisError):
    """A contour passes too close to a zero or pole of the integrand."""


class ConvergenceError(AnalysisError):
    """Adaptive quadrature or iterative refinement failed to converge."""


class AmbiguousRankError(AnalysisError):
    """Numeric rank decision fell inside the ambiguity band."""
