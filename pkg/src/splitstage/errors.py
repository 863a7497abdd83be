"""Exception hierarchy for splitstage.

Every failure mode the library reports deliberately gets its own class so
callers (and the CLI exit-code mapping) can discriminate without string
matching.
"""


class SplitstageError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(SplitstageError):
    """Operands have incompatible shapes."""


class SingularMatrixError(SplitstageError):
    """A pivot fell below the singularity threshold during factorization."""


class NoConvergenceError(SplitstageError):
    """An eigenvalue iteration hit its cap before reaching tolerance.

    Carries the best estimate found so far in ``best_estimate``.
    """

    def __init__(self, message, best_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate


class InvalidSplittingError(SplitstageError):
    """The pair (U, V) does not reconstruct A to tolerance."""


class ZeroDiagonalError(SplitstageError):
    """A splitting constructor needs a nonzero diagonal and found a zero."""


class BadRelaxationError(SplitstageError):
    """Relaxation parameter outside (0, 2)."""


class HypothesisMismatchError(SplitstageError):
    """Inner splitting does not split the outer splitting's U."""


class NotMonotoneError(SplitstageError):
    """The coefficient matrix is not monotone with respect to the cone."""


class MismatchedMatrixError(SplitstageError):
    """Two splittings being compared do not split the same matrix."""


class HypothesisFailedError(SplitstageError):
    """A theorem hypothesis required by an operation does not hold.

    ``hypothesis`` names the first violated condition.
    """

    def __init__(self, hypothesis, message=None):
        super().__init__(message or f"hypothesis violated: {hypothesis}")
        self.hypothesis = hypothesis


class MaxIterationsError(SplitstageError):
    """An iterative solve exhausted its outer-iteration budget."""


class InvalidParamsError(SplitstageError):
    """Epidemic model parameters violate their constraints."""
