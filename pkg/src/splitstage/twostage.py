"""Two-stage iteration: operators, solvers, and monotone bracketing.

The scheme couples an outer splitting A = U - V with an inner splitting
U = F - G. One outer step freezes the right-hand side b~ = V x_k + b and
applies s(k) inner sweeps F y <- G y + b~ starting from y = x_k, so the
iterate satisfies

    x_{k+1} = T_s x_k + P_s^-1 b,
    T_s     = (F^-1 G)^s + sum_{j<s} (F^-1 G)^j F^-1 V,
    P_s^-1  = sum_{j<s} (F^-1 G)^j F^-1.

The solvers below run exactly this recurrence through the cached
factorization of F (no dense inverse on the hot path); the operator builders
form T_s, its type-II companion and P_s^-1 explicitly for analysis.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .cones import SimplicialCone
from .errors import (
    BadRelaxationError,
    HypothesisFailedError,
    HypothesisMismatchError,
    MaxIterationsError,
    MismatchedMatrixError,
)
from .linalg import (
    as_square,
    is_entrywise_nonneg,
    lu_factor,
    lu_solve_factored,
    max_abs,
    norm_inf,
    perron_pair,
    solve_right,
    spectral_radius,
)
from .splittings import (
    RECONSTRUCTION_RTOL,
    Splitting,
    classify,
    commutation_holds,
    sor_splitting,
)

ScheduleLike = "int | Sequence[int] | Callable[[int], int]"


@dataclass(frozen=True)
class TwoStageConfig:
    """Configuration of a two-stage solve.

    ``schedule`` is the inner sweep count: a constant for the stationary
    scheme, or a sequence / callable k -> s(k) for the non-stationary one
    (a finite sequence is extended by repeating its last entry). ``omega``
    parameterizes the default inner splitting (SOR of the outer's U) when no
    explicit inner splitting is supplied to the solver.
    """
    schedule: object = 2
    omega: float = 1.0
    eps: float = 1e-8
    max_outer: int = 100_000
    initial: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if not 0.0 < self.omega < 2.0:
            raise BadRelaxationError(
                f"relaxation parameter {self.omega} outside (0, 2)")
        if self.eps <= 0.0:
            raise ValueError("eps must be positive")
        if self.max_outer < 1:
            raise ValueError("max_outer must be at least 1")
        if isinstance(self.schedule, int):
            if self.schedule < 1:
                raise ValueError("inner sweep count must be at least 1")
        elif isinstance(self.schedule, Sequence):
            seq = tuple(int(s) for s in self.schedule)
            if not seq or any(s < 1 for s in seq):
                raise ValueError("schedule entries must be >= 1")
            object.__setattr__(self, "schedule", seq)
        elif not callable(self.schedule):
            raise TypeError("schedule must be an int, a sequence, or callable")

    def schedule_fn(self) -> Callable[[int], int]:
        sched = self.schedule
        if isinstance(sched, int):
            return lambda k: sched
        if isinstance(sched, tuple):
            last = len(sched) - 1
            return lambda k: sched[min(k, last)]
        def call(k: int) -> int:
            s = int(sched(k))
            if s < 1:
                raise ValueError(f"schedule produced s({k}) = {s} < 1")
            return s
        return call

    def constant_sweeps(self) -> int:
        """The stationary sweep count; rejects genuinely varying schedules."""
        if isinstance(self.schedule, int):
            return self.schedule
        if isinstance(self.schedule, tuple):
            if len(set(self.schedule)) == 1:
                return self.schedule[0]
        raise ValueError("stationary solver needs a constant sweep schedule")


@dataclass(frozen=True)
class IterationReport:
    """Outcome of an iterative solve.

    ``residual_history`` holds the stopping quantity per outer step: the
    max-entry norm of the difference between successive iterates (for the
    bracketing iteration, the gap between the two sequences).
    """
    outer_iterations: int
    converged: bool
    final_update_norm: float
    residual_history: tuple[float, ...]
    spectral_radius_T: float | None = None
    final_residual: float | None = None


def _require_inner_splits_u(outer: Splitting, inner: Splitting):
    scale = max(norm_inf(outer.u), 1.0)
    if inner.a.shape != outer.u.shape or \
            max_abs(inner.a - outer.u) > RECONSTRUCTION_RTOL * scale:
        raise HypothesisMismatchError("inner splitting must split the outer U")


def two_stage_operator(outer: Splitting, inner: Splitting, s: int) -> np.ndarray:
    """T_s, the iteration operator of the two-stage scheme."""
    if s < 1:
        raise ValueError("sweep count must be at least 1")
    _require_inner_splits_u(outer, inner)
    f_inv_g = inner.solve_u(inner.v)
    f_inv_v = inner.solve_u(outer.v)
    total = f_inv_v.copy()
    power = f_inv_g
    for _ in range(1, s):
        total += power @ f_inv_v
        power = power @ f_inv_g
    return power + total


def two_stage_operator_type2(outer: Splitting, inner: Splitting,
                             s: int) -> np.ndarray:
    """The companion operator built from right quotients G F^-1 and V F^-1.

    It is cone-nonnegative whenever the inner splitting is weak regular of
    type II, and similar to T_s (via conjugation by A) when V F^-1 G =
    G F^-1 V, so both share a spectral radius under that commutation.
    """
    if s < 1:
        raise ValueError("sweep count must be at least 1")
    _require_inner_splits_u(outer, inner)
    g_f_inv = solve_right(inner.u, inner.v)
    v_f_inv = solve_right(inner.u, outer.v)
    total = v_f_inv.copy()
    power = g_f_inv
    for _ in range(1, s):
        total += power @ v_f_inv
        power = power @ g_f_inv
    return power + total


def inner_sweep_inverse(inner: Splitting, s: int) -> np.ndarray:
    """P_s^-1 = sum_{j<s} (F^-1 G)^j F^-1: the map sending b to the result
    of s inner sweeps started from zero."""
    if s < 1:
        raise ValueError("sweep count must be at least 1")
    f_inv = inner.u_inverse
    f_inv_g = inner.solve_u(inner.v)
    total = f_inv.copy()
    power = f_inv_g
    for _ in range(1, s):
        total += power @ f_inv
        power = power @ f_inv_g
    return total


def default_inner(outer: Splitting, omega: float) -> Splitting:
    """The inner splitting used when none is given: SOR(omega) of the outer U."""
    return sor_splitting(outer.u, omega)


def _as_columns(b, n: int) -> tuple[np.ndarray, bool]:
    arr = np.asarray(b, dtype=float)
    if arr.ndim == 1:
        if arr.shape[0] != n:
            raise MismatchedMatrixError(
                f"rhs of length {arr.shape[0]} against system of size {n}")
        return arr.reshape(n, 1).copy(), True
    if arr.ndim == 2 and arr.shape[0] == n:
        return arr.copy(), False
    raise MismatchedMatrixError(f"rhs shape {arr.shape} against size {n}")


def _initial_iterate(cfg: TwoStageConfig, shape) -> np.ndarray:
    if cfg.initial is None:
        return np.zeros(shape)
    init = np.asarray(cfg.initial, dtype=float)
    if init.ndim == 1:
        init = init.reshape(-1, 1)
    if init.shape != shape:
        init = np.broadcast_to(init, shape).copy()
    return init.astype(float).copy()


def _sweep_solve(a, b, outer: Splitting, inner: Splitting, cfg: TwoStageConfig,
                 schedule: Callable[[int], int]):
    a = as_square(a)
    scale = max(norm_inf(a), 1.0)
    if max_abs(outer.a - a) > RECONSTRUCTION_RTOL * scale:
        raise MismatchedMatrixError("outer splitting does not split A")
    _require_inner_splits_u(outer, inner)

    rhs, vector_rhs = _as_columns(b, a.shape[0])
    x = _initial_iterate(cfg, rhs.shape)
    v = outer.v
    g = inner.v
    history = []
    converged = False
    # a divergent scheme overflows before hitting the cap; the bailout below
    # handles that, so the overflow itself need not warn
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(cfg.max_outer):
            sweeps = schedule(k)
            if sweeps < 1:
                raise ValueError(f"schedule produced s({k}) = {sweeps} < 1")
            frozen = v @ x + rhs
            y = x
            for _ in range(sweeps):
                y = lu_solve_factored(inner.u_factors, g @ y + frozen)
            delta = max_abs(y - x)
            history.append(delta)
            x = y
            if delta <= cfg.eps:
                converged = True
                break
            if not np.isfinite(delta):
                break
        residual = max_abs(a @ x - rhs)
    result = x[:, 0] if vector_rhs else x
    return result, history, converged, residual


def run_stationary(a, b, outer: Splitting, cfg: TwoStageConfig,
                   inner: Splitting | None = None,
                   with_operator_radius: bool = False):
    """Solve A X = B by the stationary two-stage scheme.

    B may carry several columns; all are iterated together and the stopping
    test is the max-entry norm of the update across all columns. Returns the
    final iterate and an IterationReport; non-convergence is reported, not
    raised (the best iterate is still returned).
    """
    sweeps = cfg.constant_sweeps()
    if inner is None:
        inner = default_inner(outer, cfg.omega)
    x, history, converged, residual = _sweep_solve(
        a, b, outer, inner, cfg, lambda k: sweeps)
    rho = None
    if with_operator_radius:
        rho = spectral_radius(two_stage_operator(outer, inner, sweeps))
    report = IterationReport(
        outer_iterations=len(history),
        converged=converged,
        final_update_norm=history[-1] if history else 0.0,
        residual_history=tuple(history),
        spectral_radius_T=rho,
        final_residual=residual,
    )
    return x, report


def run_nonstationary(a, b, outer: Splitting, cfg: TwoStageConfig,
                      inner: Splitting | None = None):
    """Solve A X = B with a sweep count s(k) that may vary per outer step."""
    if inner is None:
        inner = default_inner(outer, cfg.omega)
    x, history, converged, residual = _sweep_solve(
        a, b, outer, inner, cfg, cfg.schedule_fn())
    report = IterationReport(
        outer_iterations=len(history),
        converged=converged,
        final_update_norm=history[-1] if history else 0.0,
        residual_history=tuple(history),
        final_residual=residual,
    )
    return x, report


# Hypothesis identifiers reported by the monotone bracketing iteration.
HYP_OUTER_REGULAR = "outer-splitting-regular"
HYP_INNER_TYPE2 = "inner-splitting-weak-type2"
HYP_COMMUTATION = "inner-commutes-with-outer-v"
HYP_MONOTONE = "matrix-monotone"
HYP_OPERATOR_NONNEG = "iteration-operator-cone-nonnegative"
HYP_LOWER_INCREASES = "lower-start-increases"
HYP_UPPER_DECREASES = "upper-start-decreases"
HYP_SOLUTION_BRACKETED = "solution-bracketed"


def monotone_bracket(a, b, x0, y0, outer: Splitting, cfg: TwoStageConfig,
                     cone: SimplicialCone, inner: Splitting | None = None):
    """Run paired iterations from below and above the solution.

    All hypotheses backing the monotone convergence statement are checked up
    front and a HypothesisFailedError naming the first violated one is
    raised. On success, returns (xs, ys, report) where xs[0] = x0 and the
    sequences satisfy x_k <= x_{k+1} <= A^-1 b <= y_{k+1} <= y_k in the cone
    order at every step (asserted as the iteration runs). The iteration
    stops once the two sequences agree to ``cfg.eps`` in max-entry norm,
    which brackets the solution to the same accuracy; exhausting
    ``cfg.max_outer`` first raises MaxIterationsError.
    """
    a = as_square(a)
    sweeps = cfg.constant_sweeps()
    if inner is None:
        inner = default_inner(outer, cfg.omega)
    scale = max(norm_inf(a), 1.0)
    if max_abs(outer.a - a) > RECONSTRUCTION_RTOL * scale:
        raise MismatchedMatrixError("outer splitting does not split A")
    _require_inner_splits_u(outer, inner)

    if not classify(outer, cone).regular:
        raise HypothesisFailedError(HYP_OUTER_REGULAR)
    if not classify(inner, cone).weak_type2:
        raise HypothesisFailedError(HYP_INNER_TYPE2)
    if not commutation_holds(outer.v, inner.u, inner.v):
        raise HypothesisFailedError(HYP_COMMUTATION)
    a_factors = lu_factor(a)
    a_inv = lu_solve_factored(a_factors, np.eye(a.shape[0]))
    if not cone.leaves_invariant(a_inv):
        raise HypothesisFailedError(HYP_MONOTONE)
    operator = two_stage_operator(outer, inner, sweeps)
    if not cone.leaves_invariant(operator):
        raise HypothesisFailedError(HYP_OPERATOR_NONNEG)

    x = np.asarray(x0, dtype=float).copy()
    y = np.asarray(y0, dtype=float).copy()
    solution = lu_solve_factored(a_factors, np.asarray(b, dtype=float))

    def step(z):
        frozen = outer.v @ z + b
        w = z
        for _ in range(sweeps):
            w = lu_solve_factored(inner.u_factors, inner.v @ w + frozen)
        return w

    if not cone.vector_le(x, step(x)):
        raise HypothesisFailedError(HYP_LOWER_INCREASES)
    if not cone.vector_le(step(y), y):
        raise HypothesisFailedError(HYP_UPPER_DECREASES)
    if not (cone.vector_le(x, solution) and cone.vector_le(solution, y)):
        raise HypothesisFailedError(HYP_SOLUTION_BRACKETED)

    xs, ys, gaps = [x], [y], []
    converged = False
    for _ in range(cfg.max_outer):
        gap = max_abs(y - x)
        if gap <= cfg.eps:
            converged = True
            break
        x_next, y_next = step(x), step(y)
        assert cone.vector_le(x, x_next), "lower sequence failed to increase"
        assert cone.vector_le(y_next, y), "upper sequence failed to decrease"
        assert cone.vector_le(x_next, solution) and \
            cone.vector_le(solution, y_next), "iterates escaped the bracket"
        x, y = x_next, y_next
        xs.append(x)
        ys.append(y)
        gaps.append(max_abs(y - x))

    if not converged:
        raise MaxIterationsError(
            f"bracketing gap {max_abs(y - x):.3e} still above {cfg.eps:g} "
            f"after {cfg.max_outer} outer iterations")
    assert max_abs(x - solution) <= 10.0 * cfg.eps
    assert max_abs(y - solution) <= 10.0 * cfg.eps
    report = IterationReport(
        outer_iterations=len(xs) - 1,
        converged=True,
        final_update_norm=max_abs(y - x),
        residual_history=tuple(gaps),
        final_residual=max_abs(a @ x - np.asarray(b, dtype=float)),
    )
    return xs, ys, report


def bracketing_initials(outer: Splitting, inner: Splitting, s: int, b):
    """Initial vectors straddling the solution, built from the dominant
    nonnegative eigenvector of the type-II operator.

    With z = A^-1 v for the unit-max eigenvector v, the pair
    (A^-1 b - z, A^-1 b + z) satisfies the entry conditions of the monotone
    bracketing iteration whenever the scheme is convergent.
    """
    t_hat = two_stage_operator_type2(outer, inner, s)
    if not is_entrywise_nonneg(t_hat, tol=1e-12):
        raise HypothesisFailedError(
            HYP_OPERATOR_NONNEG,
            "type-II operator is not entrywise nonnegative")
    rho, vec = perron_pair(np.clip(t_hat, 0.0, None))
    if rho >= 1.0:
        raise HypothesisFailedError(
            "two-stage-operator-convergent",
            f"operator radius {rho:.6f} is not below one")
    a_factors = lu_factor(outer.a)
    z = lu_solve_factored(a_factors, vec)
    center = lu_solve_factored(a_factors, np.asarray(b, dtype=float))
    return center - z, center + z
