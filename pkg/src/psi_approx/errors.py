"""Exception types raised across the package."""


class PsiApproxError(Exception):
    """Base class for all package errors."""


class DomainError(PsiApproxError, ValueError):
    """Argument outside the domain of a function (e.g. t < 1, s <= 1)."""


class AdmissibilityError(PsiApproxError, ValueError):
    """Family parameters violate the admissibility constraints."""


class DivergenceError(PsiApproxError, ArithmeticError):
    """A required series or integral diverges."""


class RangeError(PsiApproxError, ValueError):
    """Value outside the range of an inverted function."""


class GridError(PsiApproxError, ValueError):
    """Quadrature grid too coarse for the polynomial it is applied to."""


class SymmetryError(PsiApproxError, ValueError):
    """Coefficients are not conjugate symmetric where a real value is needed."""


class TruncationError(PsiApproxError, ValueError):
    """Requested truncation tolerance cannot be met."""


class CombinatorialBlowupError(PsiApproxError, ValueError):
    """Exhaustive enumeration would exceed the subset budget."""


class HypothesisError(PsiApproxError, ValueError):
    """A theorem hypothesis fails for the given parameters."""
