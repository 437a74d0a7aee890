"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`WienerRadonError`, so callers (and the CLI) can catch one type.
"""


class WienerRadonError(ValueError):
    """Base class for all library errors."""


class SNotOnGrid(WienerRadonError):
    """A time that must be a grid knot is not one."""


class GridMismatch(WienerRadonError):
    """Two vectors live on different grids."""


class NotARefinement(WienerRadonError):
    """Target grid does not contain the source knots."""


class SingularGram(WienerRadonError):
    """Constraint vectors are linearly dependent within tolerance."""

    def __init__(self, smallest_eigenvalue: float, largest_eigenvalue: float):
        self.smallest_eigenvalue = smallest_eigenvalue
        self.largest_eigenvalue = largest_eigenvalue
        super().__init__(
            f"Gram matrix is singular: smallest eigenvalue {smallest_eigenvalue:.3e}"
            f" vs largest {largest_eigenvalue:.3e}"
        )


class TimesNotIncreasing(WienerRadonError):
    """Bridge times are not strictly increasing inside (0, 1]."""


class NumericalInconsistency(WienerRadonError):
    """A computed variance came out clearly negative."""


class DegreeTooLarge(WienerRadonError):
    """Hermite or chaos order above the supported limit."""


class VarianceOrder(WienerRadonError):
    """Shift-of-variance needs u2 >= var(X)."""


class BadT(WienerRadonError):
    """Conditioning time T must lie in (0, 1]."""


class IndefiniteCovariance(WienerRadonError):
    """Covariance has an eigenvalue clearly below zero."""


class UnknownFunctional(WienerRadonError):
    """Estimator received something that is not a supported functional."""


class BaseMismatch(WienerRadonError):
    """Fock elements built over different bases or truncation orders."""


class NotInL0(WienerRadonError):
    """Vector is not in the direction space of the affine subspace."""


class SchemaError(WienerRadonError):
    """Input JSON does not match the expected schema."""
