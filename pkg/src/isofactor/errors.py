"""Exception hierarchy."""


class IsofactorError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(IsofactorError, ValueError):
    """Operands have incompatible shapes."""


class DegenerateSubspaceError(IsofactorError, ValueError):
    """A subspace expected to be non-degenerate is (numerically) degenerate.

    Attributes
    ----------
    vector : numpy.ndarray or None
        A vector of the span on which the form nearly vanishes.
    """

    def __init__(self, message, vector=None):
        super().__init__(message)
        self.vector = vector


class ConvergenceError(IsofactorError, ArithmeticError):
    """An iterative method ran out of budget."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class AmbiguousRankError(IsofactorError, ArithmeticError):
    """A singular value fell inside the ambiguity band around a threshold.

    Raised instead of silently picking a rank; loosen or tighten the
    tolerances and retry.
    """

    def __init__(self, message, singular_value=None, threshold=None):
        super().__init__(message)
        self.singular_value = singular_value
        self.threshold = threshold


class NotFormUnitaryError(IsofactorError, ValueError):
    """Input does not preserve the Hermitian form."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ClassMismatchError(IsofactorError, ValueError):
    """A factorizer received an element of the wrong conjugacy class."""


class NotReversibleError(IsofactorError, ValueError):
    """Spectrum is not closed under the inversion required by a construction."""


class UnsupportedCaseError(IsofactorError, ValueError):
    """Input lies outside the cases a construction covers."""


class MatrixFormatError(IsofactorError, ValueError):
    """Malformed matrix JSON."""
