"""Matrix splittings A = U - V: construction, classification, comparison.

A splitting is *regular* w.r.t. a cone K when U^-1 and V both leave K
invariant; *weak regular of type I* when U^-1 and U^-1 V do; *weak regular of
type II* when U^-1 and V U^-1 do. Regularity implies both weak types. For a
monotone matrix (A^-1 >= 0 in the cone order) every weak regular splitting of
either type is convergent, and the comparison rules implemented in
``compare_splittings`` order the spectral radii of two such splittings under
checkable hypotheses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cones import SimplicialCone
from .errors import (
    BadRelaxationError,
    HypothesisMismatchError,
    InvalidSplittingError,
    MismatchedMatrixError,
    NotMonotoneError,
    ZeroDiagonalError,
)
from .linalg import (
    as_square,
    lu_factor,
    lu_solve_factored,
    max_abs,
    norm_inf,
    solve_right,
    spectral_radius,
)

RECONSTRUCTION_RTOL = 1e-12


class Splitting:
    """An additive splitting A = U - V with nonsingular U.

    U is factorized once at construction (which doubles as the
    nonsingularity check) and the factors are cached for the solve-heavy
    paths. Instances are immutable.
    """

    __slots__ = ("a", "u", "v", "u_factors", "_u_inverse")

    def __init__(self, a, u, v):
        a = as_square(a).copy()
        u = as_square(u).copy()
        v = as_square(v).copy()
        if not (a.shape == u.shape == v.shape):
            raise MismatchedMatrixError(
                f"shapes differ: A{a.shape}, U{u.shape}, V{v.shape}")
        scale = max(norm_inf(a), 1.0)
        if max_abs(a - (u - v)) > RECONSTRUCTION_RTOL * scale:
            raise InvalidSplittingError(
                "U - V does not reconstruct A within tolerance")
        for m in (a, u, v):
            m.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "u_factors", lu_factor(u))
        object.__setattr__(self, "_u_inverse", None)

    def __setattr__(self, name, value):
        raise AttributeError("Splitting is immutable")

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    @property
    def u_inverse(self) -> np.ndarray:
        """U^-1, computed on first use and cached."""
        if self._u_inverse is None:
            inv = lu_solve_factored(self.u_factors, np.eye(self.dim))
            inv.flags.writeable = False
            object.__setattr__(self, "_u_inverse", inv)
        return self._u_inverse

    def solve_u(self, b) -> np.ndarray:
        """Solve U x = b using the cached factorization."""
        return lu_solve_factored(self.u_factors, np.asarray(b, dtype=float))

    def __repr__(self):
        return f"Splitting(dim={self.dim})"


@dataclass(frozen=True)
class SplittingClass:
    """Classification flags of a splitting w.r.t. a cone."""
    regular: bool
    weak_type1: bool
    weak_type2: bool

    def __post_init__(self):
        if self.regular and not (self.weak_type1 and self.weak_type2):
            raise ValueError("regular implies both weak types")

    @property
    def weak_either(self) -> bool:
        return self.weak_type1 or self.weak_type2


def classify(s: Splitting, cone: SimplicialCone) -> SplittingClass:
    """Classify a splitting as regular / weak type I / weak type II."""
    u_inv = s.u_inverse
    u_inv_ok = cone.leaves_invariant(u_inv)
    regular = u_inv_ok and cone.leaves_invariant(s.v)
    weak1 = regular or (u_inv_ok and cone.leaves_invariant(s.solve_u(s.v)))
    weak2 = regular or (u_inv_ok and cone.leaves_invariant(s.v @ u_inv))
    return SplittingClass(regular=regular, weak_type1=weak1, weak_type2=weak2)


def iteration_matrix(s: Splitting) -> np.ndarray:
    """H = U^-1 V, the classical iteration operator of the splitting."""
    return s.solve_u(s.v)


@dataclass(frozen=True)
class ConvergenceResult:
    convergent: bool
    spectral_radius: float

    def __bool__(self) -> bool:
        return self.convergent


def is_convergent(s: Splitting, tol: float = 1e-10) -> ConvergenceResult:
    """Whether rho(U^-1 V) < 1 (with a ``tol`` guard); exposes the radius."""
    rho = spectral_radius(iteration_matrix(s), tol=min(tol, 1e-10))
    return ConvergenceResult(convergent=rho < 1.0 - tol, spectral_radius=rho)


def _diagonal_parts(a: np.ndarray):
    d = np.diag(a).copy()
    if np.any(d == 0.0):
        raise ZeroDiagonalError("matrix has a zero diagonal entry")
    lower = -np.tril(a, -1)
    upper = -np.triu(a, 1)
    return d, lower, upper


def jacobi_splitting(a) -> Splitting:
    """U = diag(A), V = diag(A) - A."""
    a = as_square(a)
    d, lower, upper = _diagonal_parts(a)
    u = np.diag(d)
    return Splitting(a, u, lower + upper)


def gauss_seidel_splitting(a) -> Splitting:
    """U = lower triangle of A including the diagonal, V = negated strict upper."""
    a = as_square(a)
    d, lower, upper = _diagonal_parts(a)
    return Splitting(a, np.diag(d) - lower, upper)


def sor_splitting(a, omega: float) -> Splitting:
    """U = D/omega - L, V = (1-omega)/omega D + R; omega = 1 is Gauss-Seidel."""
    if not 0.0 < omega < 2.0:
        raise BadRelaxationError(f"relaxation parameter {omega} outside (0, 2)")
    a = as_square(a)
    d, lower, upper = _diagonal_parts(a)
    u = np.diag(d / omega) - lower
    v = np.diag(d * ((1.0 - omega) / omega)) + upper
    return Splitting(a, u, v)


def trivial_splitting(a) -> Splitting:
    """U = A, V = 0: the outer solve is exact and the scheme is one inner stage."""
    a = as_square(a)
    return Splitting(a, a, np.zeros_like(a))


def commutation_holds(v, f, g, tol: float = 1e-10) -> bool:
    """Whether V F^-1 G = G F^-1 V to a scaled tolerance.

    This commutation is the hypothesis under which the two operator variants
    of the two-stage scheme are similar (and hence share a spectral radius).
    """
    v = as_square(v)
    f_factors = lu_factor(f)
    g = as_square(g)
    left = v @ lu_solve_factored(f_factors, g)
    right = g @ lu_solve_factored(f_factors, v)
    f_inv_norm = norm_inf(lu_solve_factored(f_factors, np.eye(v.shape[0])))
    scale = 1.0 + norm_inf(v) * f_inv_norm * norm_inf(g)
    return norm_inf(left - right) <= tol * scale


def _require_same_a(s1: Splitting, s2: Splitting):
    scale = max(norm_inf(s1.a), 1.0)
    if max_abs(s1.a - s2.a) > RECONSTRUCTION_RTOL * scale:
        raise MismatchedMatrixError("splittings do not split the same matrix")


def induced_splitting(outer: Splitting, inner: Splitting, s: int) -> Splitting:
    """The unique splitting A = B - C whose classical operator is the
    two-stage operator with ``s`` inner sweeps.

    B = A (I - T_s)^-1 and C = B - A. Requires the inner splitting to split
    the outer's U.
    """
    from .twostage import two_stage_operator  # local import avoids a cycle

    if s < 1:
        raise ValueError("inner sweep count must be at least 1")
    scale = max(norm_inf(outer.u), 1.0)
    if max_abs(inner.a - outer.u) > RECONSTRUCTION_RTOL * scale:
        raise HypothesisMismatchError("inner splitting must split the outer U")
    t = two_stage_operator(outer, inner, s)
    eye = np.eye(outer.dim)
    b = solve_right(eye - t, outer.a)
    return Splitting(outer.a, b, b - outer.a)


# Comparison rules: names, the hypotheses they need, and the shared
# conclusion rho(H1) <= rho(H2) < 1 for splittings of a monotone matrix.
RULE_TYPE2_V_ORDER = "type2-pair-v-order"
RULE_MIXED_TYPE_INVERSE_ORDER = "mixed-type-inverse-order"
RULE_TYPE2_U_ORDER = "type2-pair-u-order"

COMPARISON_SLACK = 1e-9


@dataclass(frozen=True)
class ComparisonReport:
    """Outcome of comparing two splittings of one monotone matrix.

    ``satisfied_rules`` lists every hypothesis set that fully holds:

    - type2-pair-v-order: both weak type II and V2 >= V1 in the cone order.
    - mixed-type-inverse-order: one splitting weak type I, the other weak
      type II, and U1^-1 >= U2^-1 in the cone order.
    - type2-pair-u-order: both weak type II and U2 >= U1 >= 0 in the cone
      order.

    Whenever any rule holds, rho1 <= rho2 < 1 is asserted (to slack) before
    the report is returned.
    """
    class1: SplittingClass
    class2: SplittingClass
    rho1: float
    rho2: float
    v2_ge_v1: bool
    u1inv_ge_u2inv: bool
    u2_ge_u1: bool
    u1_nonneg: bool
    satisfied_rules: tuple[str, ...]

    @property
    def predicts_ordering(self) -> bool:
        return bool(self.satisfied_rules)


def compare_splittings(s1: Splitting, s2: Splitting,
                       cone: SimplicialCone) -> ComparisonReport:
    """Compare two splittings of the same K-monotone matrix.

    Checks which comparison hypotheses hold and, when a full hypothesis set
    is satisfied, asserts the predicted radius ordering rather than silently
    reporting it; a violation would contradict the backing theory and is
    surfaced as an AssertionError.
    """
    _require_same_a(s1, s2)
    a_inv = lu_solve_factored(lu_factor(s1.a), np.eye(s1.dim))
    if not cone.leaves_invariant(a_inv):
        raise NotMonotoneError("matrix inverse does not leave the cone invariant")

    class1 = classify(s1, cone)
    class2 = classify(s2, cone)
    rho1 = spectral_radius(iteration_matrix(s1))
    rho2 = spectral_radius(iteration_matrix(s2))

    v2_ge_v1 = cone.cone_le(s1.v, s2.v)
    u1inv_ge_u2inv = cone.cone_le(s2.u_inverse, s1.u_inverse)
    u2_ge_u1 = cone.cone_le(s1.u, s2.u)
    u1_nonneg = cone.leaves_invariant(s1.u)

    rules = []
    both_type2 = class1.weak_type2 and class2.weak_type2
    mixed_types = (class1.weak_type1 and class2.weak_type2) or \
                  (class1.weak_type2 and class2.weak_type1)
    if both_type2 and v2_ge_v1:
        rules.append(RULE_TYPE2_V_ORDER)
    if mixed_types and u1inv_ge_u2inv:
        rules.append(RULE_MIXED_TYPE_INVERSE_ORDER)
    if both_type2 and u2_ge_u1 and u1_nonneg:
        rules.append(RULE_TYPE2_U_ORDER)

    if rules:
        assert rho1 <= rho2 + COMPARISON_SLACK and rho2 < 1.0 + COMPARISON_SLACK, (
            f"comparison rule(s) {rules} predicted rho1 <= rho2 < 1 "
            f"but got rho1={rho1!r}, rho2={rho2!r}"
        )

    return ComparisonReport(
        class1=class1, class2=class2, rho1=rho1, rho2=rho2,
        v2_ge_v1=v2_ge_v1, u1inv_ge_u2inv=u1inv_ge_u2inv,
        u2_ge_u1=u2_ge_u1, u1_nonneg=u1_nonneg,
        satisfied_rules=tuple(rules),
    )
