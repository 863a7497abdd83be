"""Dense linear algebra kernels for small matrices.

Everything operates on plain 2-D (matrices) and 1-D (vectors) float64
``numpy`` arrays; the constructors below validate shape and finiteness once
so the numerical kernels can assume clean inputs. Sizes of interest are
n <= 100, so the factorization is a straightforward vectorized
partial-pivoting LU rather than anything blocked.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    DimensionMismatchError,
    NoConvergenceError,
    SingularMatrixError,
)

# Pivot magnitudes below PIVOT_RTOL * ||A||_inf are treated as singular.
PIVOT_RTOL = 1e-13

POWER_ITERATION_CAP = 100_000


def as_matrix(a) -> np.ndarray:
    """Validate and return ``a`` as a 2-D float64 array.

    Raises DimensionMismatchError for wrong rank and ValueError for
    non-finite entries.
    """
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise DimensionMismatchError(f"expected a matrix, got ndim={m.ndim}")
    if m.size and not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def as_vector(v) -> np.ndarray:
    """Validate and return ``v`` as a 1-D float64 array."""
    x = np.asarray(v, dtype=float)
    if x.ndim != 1:
        raise DimensionMismatchError(f"expected a vector, got ndim={x.ndim}")
    if x.size and not np.all(np.isfinite(x)):
        raise ValueError("vector entries must be finite")
    return x


def as_square(a) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got {m.shape}")
    return m


def norm_inf(a) -> float:
    """Max absolute row sum for matrices, max absolute entry for vectors."""
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        return float(np.max(np.abs(a))) if a.size else 0.0
    return float(np.max(np.sum(np.abs(a), axis=1))) if a.size else 0.0


def max_abs(a) -> float:
    """Largest entry magnitude; the stopping-test norm for iterates."""
    a = np.asarray(a, dtype=float)
    return float(np.max(np.abs(a))) if a.size else 0.0


def lu_factor(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Partial-pivoting LU of a square matrix.

    Returns (lu, piv) where lu packs the unit-lower and upper factors and
    piv records the row chosen at each elimination step. Raises
    SingularMatrixError when a pivot is smaller than PIVOT_RTOL * ||A||_inf.
    """
    lu = as_square(a).copy()
    n = lu.shape[0]
    piv = np.arange(n)
    threshold = PIVOT_RTOL * max(norm_inf(lu), np.finfo(float).tiny)
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if np.abs(lu[p, k]) < threshold:
            raise SingularMatrixError(
                f"pivot {abs(lu[p, k]):.3e} below threshold {threshold:.3e} "
                f"at column {k}"
            )
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            piv[k] = p
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, piv


def lu_solve_factored(factors: tuple[np.ndarray, np.ndarray],
                      b: np.ndarray) -> np.ndarray:
    """Solve A X = B given lu_factor(A) output. B may be a vector or matrix."""
    lu, piv = factors
    n = lu.shape[0]
    vector_rhs = b.ndim == 1
    x = b.reshape(n, -1).copy() if not vector_rhs else b.reshape(n, 1).copy()
    if x.shape[0] != n:
        raise DimensionMismatchError(
            f"rhs has {x.shape[0]} rows, matrix is {n}x{n}")
    # the packed multipliers live in the final row ordering, so the whole
    # swap sequence must hit the rhs before substitution starts
    for k in range(n):
        p = piv[k]
        if p != k:
            x[[k, p]] = x[[p, k]]
    for k in range(n - 1):
        x[k + 1:] -= np.outer(lu[k + 1:, k], x[k])
    for k in range(n - 1, -1, -1):
        x[k] /= lu[k, k]
        if k:
            x[:k] -= np.outer(lu[:k, k], x[k])
    return x[:, 0] if vector_rhs else x


def lu_solve(a, b) -> np.ndarray:
    """Solve A X = B by partial-pivoting LU; B may have several columns."""
    return lu_solve_factored(lu_factor(a), np.asarray(b, dtype=float))


def solve_right(a, b) -> np.ndarray:
    """Solve X A = B, i.e. right-divide B by A."""
    return lu_solve(as_square(a).T, as_matrix(b).T).T


def inverse(a) -> np.ndarray:
    """A^-1 computed as the LU solve of A X = I."""
    a = as_square(a)
    return lu_solve(a, np.eye(a.shape[0]))


def kron(a, b) -> np.ndarray:
    """Kronecker product; block (i, j) of the result is a[i, j] * b."""
    return np.kron(as_matrix(a), as_matrix(b))


def is_entrywise_nonneg(a, tol: float = 0.0) -> bool:
    """True when every entry is >= -tol."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    a = np.asarray(a, dtype=float)
    return bool(np.all(a >= -tol))


def _collatz_bounds(y: np.ndarray, x: np.ndarray) -> tuple[float, float]:
    q = y / x
    return float(np.min(q)), float(np.max(q))


def _power_radius_nonneg(a: np.ndarray, tol: float, seed: int,
                         max_iter: int) -> float:
    """Spectral radius of an entrywise-nonnegative matrix by power iteration.

    Iterates on A + cI (c = ||A||_inf) so the target eigenvalue is strictly
    dominant even when peripheral eigenvalues tie in modulus, and the
    iterate stays strictly positive. Two stopping rules run side by side:

    - the Collatz-Wielandt quotients min/max_i (Mx)_i/x_i bracket the
      radius rigorously and close for irreducible matrices;
    - for reducible matrices (where the lower quotient can stall) the
      Rayleigh quotients converge geometrically, so their empirical ratio
      gives an error estimate and an extrapolated limit.
    """
    n = a.shape[0]
    shift = max(norm_inf(a), 1.0)
    m = a + shift * np.eye(n)
    rng = np.random.default_rng(seed)
    x = np.ones(n)
    tiny = np.finfo(float).tiny
    best = None
    q_prev = None
    d_prev = None
    settled = 0
    for _ in range(max_iter):
        y = m @ x
        lo, hi = _collatz_bounds(y, x)
        best = 0.5 * (lo + hi) - shift
        if hi - lo <= tol * max(abs(hi), tiny):
            return best
        q = float(x @ y) / float(x @ x)
        if q_prev is not None:
            d = q - q_prev
            if d == 0.0:
                return q - shift
            if d_prev is not None and d_prev != 0.0:
                ratio = d / d_prev
                if 0.0 < abs(ratio) < 0.99:
                    extrapolated = q + d * ratio / (1.0 - ratio)
                    err = abs(d) * abs(ratio) / (1.0 - abs(ratio))
                    if err <= 0.05 * tol * max(abs(extrapolated), tiny):
                        settled += 1
                        if settled >= 2:
                            return extrapolated - shift
                    else:
                        settled = 0
            d_prev = d
        q_prev = q
        scale = np.max(y)
        if scale <= 0.0 or not np.isfinite(scale):
            # should not happen for a shifted nonnegative iteration; restart
            x = rng.random(n) + 0.5
            q_prev = d_prev = None
            settled = 0
            continue
        x = y / scale
    raise NoConvergenceError(
        f"power iteration did not reach tolerance {tol:g} "
        f"within {max_iter} steps",
        best_estimate=best,
    )


def spectral_radius(a, tol: float = 1e-10, seed: int = 0,
                    max_iter: int = POWER_ITERATION_CAP) -> float:
    """Largest eigenvalue modulus of a square matrix.

    Entrywise-nonnegative matrices go through the shifted power iteration
    (deterministic given ``seed``); anything else through dense eigenvalue
    extraction. Both routes agree to ``tol`` where both apply, which the
    test suite checks on random nonnegative instances.
    """
    a = as_square(a)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if a.shape[0] == 0:
        return 0.0
    if is_entrywise_nonneg(a):
        return _power_radius_nonneg(a, tol, seed, max_iter)
    return float(np.max(np.abs(np.linalg.eigvals(a))))


def spectral_radius_qr(a) -> float:
    """Spectral radius via dense eigenvalue extraction only.

    Reference route used to cross-check the power iteration.
    """
    a = as_square(a)
    if a.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(a))))


def perron_pair(a, tol: float = 1e-12, seed: int = 0,
                max_iter: int = POWER_ITERATION_CAP) -> tuple[float, np.ndarray]:
    """Dominant eigenvalue and a nonnegative eigenvector of a nonnegative matrix.

    The vector is normalized to unit max-entry. Convergence is measured on
    the eigen-residual of the shifted iteration.
    """
    a = as_square(a)
    if not is_entrywise_nonneg(a):
        raise ValueError("perron_pair requires an entrywise-nonnegative matrix")
    n = a.shape[0]
    shift = max(norm_inf(a), 1.0)
    m = a + shift * np.eye(n)
    rng = np.random.default_rng(seed)
    x = np.ones(n) / n
    value = None
    for _ in range(max_iter):
        y = m @ x
        scale = float(np.max(y))
        if scale <= 0.0 or not np.isfinite(scale):
            x = rng.random(n) + 0.5
            x /= np.max(x)
            continue
        y /= scale
        value = scale - shift
        if max_abs(y - x) <= tol * max(1.0, abs(scale)):
            x = y
            break
        x = y
    else:
        raise NoConvergenceError(
            f"Perron iteration did not settle within {max_iter} steps",
            best_estimate=value,
        )
    x = np.clip(x, 0.0, None)
    x /= np.max(x)
    rho = float(x @ (a @ x) / (x @ x))
    return rho, x


def condition_number_2(a) -> float:
    """2-norm condition number sigma_max / sigma_min.

    Singular values are taken as square roots of the eigenvalues of A^T A.
    """
    a = as_square(a)
    gram = a.T @ a
    eigs = np.linalg.eigvalsh(gram)
    smin = np.sqrt(max(eigs[0], 0.0))
    smax = np.sqrt(max(eigs[-1], 0.0))
    if smin <= PIVOT_RTOL * max(smax, np.finfo(float).tiny):
        raise SingularMatrixError("matrix is singular to working precision")
    return float(smax / smin)
