"""splitstage: two-stage matrix-splitting solvers over simplicial cones.

The library covers four layers:

- dense kernels for small matrices (``linalg``): LU with partial pivoting,
  spectral radii, Kronecker products;
- simplicial cones and the partial orders they induce (``cones``);
- matrix splittings A = U - V with cone-aware classification, convergence
  tests and hypothesis-checked comparison (``splittings``);
- the two-stage inner/outer iteration with its operators, the monotone
  bracketing iteration (``twostage``), and a pandemic-model application that
  computes next-generation matrices and R0 (``epidemic``).

A command-line front end lives in ``splitstage.cli``.
"""

from .cones import SimplicialCone, orthant
from .epidemic import (
    AgeStructure,
    ContactComponents,
    NgmResult,
    SaiuqrParams,
    build_infection,
    build_infection_weighted,
    build_transition,
    contact_matrix,
    expand_age,
    incidence,
    ngm,
)
from .errors import (
    BadRelaxationError,
    DimensionMismatchError,
    HypothesisFailedError,
    HypothesisMismatchError,
    InvalidParamsError,
    InvalidSplittingError,
    MaxIterationsError,
    MismatchedMatrixError,
    NoConvergenceError,
    NotMonotoneError,
    SingularMatrixError,
    SplitstageError,
    ZeroDiagonalError,
)
from .linalg import (
    condition_number_2,
    inverse,
    is_entrywise_nonneg,
    kron,
    lu_solve,
    spectral_radius,
)
from .splittings import (
    ComparisonReport,
    ConvergenceResult,
    Splitting,
    SplittingClass,
    classify,
    commutation_holds,
    compare_splittings,
    gauss_seidel_splitting,
    induced_splitting,
    is_convergent,
    iteration_matrix,
    jacobi_splitting,
    sor_splitting,
    trivial_splitting,
)
from .twostage import (
    IterationReport,
    TwoStageConfig,
    bracketing_initials,
    inner_sweep_inverse,
    monotone_bracket,
    run_nonstationary,
    run_stationary,
    two_stage_operator,
    two_stage_operator_type2,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # cones
    "SimplicialCone", "orthant",
    # linalg
    "lu_solve", "inverse", "spectral_radius", "kron", "condition_number_2",
    "is_entrywise_nonneg",
    # splittings
    "Splitting", "SplittingClass", "ComparisonReport", "ConvergenceResult",
    "classify", "iteration_matrix", "is_convergent", "jacobi_splitting",
    "gauss_seidel_splitting", "sor_splitting", "trivial_splitting",
    "commutation_holds", "induced_splitting", "compare_splittings",
    # two-stage
    "TwoStageConfig", "IterationReport", "two_stage_operator",
    "two_stage_operator_type2", "inner_sweep_inverse", "run_stationary",
    "run_nonstationary", "monotone_bracket", "bracketing_initials",
    # epidemic
    "SaiuqrParams", "AgeStructure", "ContactComponents", "NgmResult",
    "build_transition", "build_infection", "build_infection_weighted",
    "contact_matrix", "expand_age", "incidence", "ngm",
    # errors
    "SplitstageError", "DimensionMismatchError", "SingularMatrixError",
    "NoConvergenceError", "InvalidSplittingError", "ZeroDiagonalError",
    "BadRelaxationError", "HypothesisMismatchError", "NotMonotoneError",
    "MismatchedMatrixError", "HypothesisFailedError", "MaxIterationsError",
    "InvalidParamsError",
]
