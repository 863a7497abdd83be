"""Simplicial cones and the partial orders they induce.

A simplicial cone in R^n is K = {P y : y >= 0} for a nonsingular generator
matrix P. Membership, interiority and matrix invariance (A K subseteq K) all
reduce to entrywise sign checks after changing basis by P^-1, which is
computed once and cached: classification sweeps call these predicates
thousands of times.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError
from .linalg import as_matrix, as_square, as_vector, inverse

DEFAULT_TOL = 1e-12


class SimplicialCone:
    """Proper cone generated by the columns of a nonsingular matrix.

    Immutable after construction; the generator inverse is cached. ``tol``
    is the slack applied to every sign test so honest nonnegativity survives
    roundoff.
    """

    __slots__ = ("generators", "generators_inverse", "tol")

    def __init__(self, generators, tol: float = DEFAULT_TOL):
        if tol < 0:
            raise ValueError("tol must be nonnegative")
        p = as_square(generators).copy()
        inv = inverse(p)  # raises SingularMatrixError for bad generators
        p.flags.writeable = False
        inv.flags.writeable = False
        object.__setattr__(self, "generators", p)
        object.__setattr__(self, "generators_inverse", inv)
        object.__setattr__(self, "tol", float(tol))

    def __setattr__(self, name, value):
        raise AttributeError("SimplicialCone is immutable")

    @property
    def dim(self) -> int:
        return self.generators.shape[0]

    def _check_vector(self, x) -> np.ndarray:
        x = as_vector(x)
        if x.shape[0] != self.dim:
            raise DimensionMismatchError(
                f"vector of length {x.shape[0]} against cone of dim {self.dim}")
        return x

    def _check_matrix(self, a) -> np.ndarray:
        a = as_matrix(a)
        if a.shape != (self.dim, self.dim):
            raise DimensionMismatchError(
                f"matrix {a.shape} against cone of dim {self.dim}")
        return a

    def contains_vector(self, x) -> bool:
        """x >= 0 in the cone order (x in K)."""
        coords = self.generators_inverse @ self._check_vector(x)
        return bool(np.all(coords >= -self.tol))

    def contains_vector_interior(self, x) -> bool:
        """x > 0 in the cone order (x in int K); strict on every coordinate."""
        coords = self.generators_inverse @ self._check_vector(x)
        return bool(np.all(coords > self.tol))

    def leaves_invariant(self, a) -> bool:
        """A K subseteq K, i.e. A >= 0 in the induced matrix order.

        For simplicial K this is an entrywise test on P^-1 A P.
        """
        a = self._check_matrix(a)
        transformed = self.generators_inverse @ a @ self.generators
        return bool(np.all(transformed >= -self.tol))

    def cone_le(self, a, b) -> bool:
        """a <= b in the induced matrix order (b - a leaves K invariant)."""
        return self.leaves_invariant(self._check_matrix(b) - self._check_matrix(a))

    def vector_le(self, x, y) -> bool:
        """x <= y in the cone order on vectors."""
        return self.contains_vector(self._check_vector(y) - self._check_vector(x))

    def __repr__(self):
        return f"SimplicialCone(dim={self.dim}, tol={self.tol:g})"


def orthant(n: int, tol: float = DEFAULT_TOL) -> SimplicialCone:
    """The nonnegative orthant in R^n (identity generators)."""
    if n < 1:
        raise ValueError("cone dimension must be at least 1")
    return SimplicialCone(np.eye(n), tol=tol)
