import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import random_basis
from splitstage import (
    DimensionMismatchError,
    SimplicialCone,
    SingularMatrixError,
    is_entrywise_nonneg,
    orthant,
)
from splitstage.linalg import norm_inf


def test_orthant_generators_are_identity():
    k = orthant(4)
    assert np.array_equal(k.generators, np.eye(4))
    assert k.tol == 1e-12


def test_orthant_membership():
    k = orthant(2)
    assert k.contains_vector([1.0, 0.0])
    assert not k.contains_vector([-1e-6, 0.0])
    assert k.contains_vector([0.0, 0.0])


def test_skewed_cone_membership():
    k = SimplicialCone([[1.0, 1.0], [0.0, 1.0]])
    # coordinates of (1,1) are (0,1); of (0,-1) are (1,-1)
    assert k.contains_vector([1.0, 1.0])
    assert not k.contains_vector([0.0, -1.0])


def test_interior_membership():
    k = orthant(2)
    assert k.contains_vector_interior([1.0, 1.0])
    assert not k.contains_vector_interior([1.0, 0.0])
    skewed = SimplicialCone([[2.0, 0.0], [0.0, 1.0]])
    assert skewed.contains_vector_interior([2.0, 1.0])


def test_singular_generators_rejected():
    with pytest.raises(SingularMatrixError):
        SimplicialCone([[1.0, 1.0], [1.0, 1.0]])


def test_leaves_invariant_orthant_matches_entrywise_sign():
    rng = np.random.default_rng(0)
    k = orthant(3)
    for _ in range(50):
        a = rng.standard_normal((3, 3))
        assert k.leaves_invariant(a) == is_entrywise_nonneg(a, tol=k.tol)


def test_negative_identity_and_rotation_fail():
    k = orthant(2)
    assert not k.leaves_invariant(-np.eye(2))
    rotation = np.array([[0.0, -1.0], [1.0, 0.0]])
    assert not k.leaves_invariant(rotation)


def test_cone_le_basics():
    k = orthant(3)
    rng = np.random.default_rng(1)
    nonneg = rng.random((3, 3))
    assert k.cone_le(np.zeros((3, 3)), nonneg)
    assert k.cone_le(nonneg, nonneg)


def test_cone_le_transitive_on_nonnegative_chains():
    rng = np.random.default_rng(2)
    k = orthant(4)
    for _ in range(25):
        a = rng.standard_normal((4, 4))
        b = a + rng.random((4, 4))
        c = b + rng.random((4, 4))
        assert k.cone_le(a, b) and k.cone_le(b, c) and k.cone_le(a, c)


def test_pointedness_at_tolerance():
    k = SimplicialCone(random_basis(np.random.default_rng(3), 3), tol=1e-10)
    rng = np.random.default_rng(4)
    for _ in range(50):
        x = rng.standard_normal(3)
        if k.contains_vector(x) and k.contains_vector(-x):
            bound = 3 * k.tol * norm_inf(k.generators)
            assert np.max(np.abs(x)) <= bound


def test_change_of_basis_preserves_order():
    rng = np.random.default_rng(5)
    for _ in range(25):
        basis = random_basis(rng, 3)
        cone = SimplicialCone(basis, tol=1e-9)
        a = rng.random((3, 3))  # entrywise nonnegative w.r.t. the orthant
        conjugated = basis @ a @ np.linalg.inv(basis)
        assert cone.leaves_invariant(conjugated)
        # and a matrix violating entrywise nonnegativity clearly fails
        bad = a.copy()
        bad[0, 1] = -1.0
        conjugated_bad = basis @ bad @ np.linalg.inv(basis)
        assert not cone.leaves_invariant(conjugated_bad)


def test_invariance_closed_under_products_and_scaling():
    rng = np.random.default_rng(6)
    k = SimplicialCone(random_basis(rng, 3), tol=1e-9)
    basis = k.generators
    basis_inv = np.linalg.inv(basis)
    for _ in range(20):
        a = basis @ rng.random((3, 3)) @ basis_inv
        b = basis @ rng.random((3, 3)) @ basis_inv
        assert k.leaves_invariant(a) and k.leaves_invariant(b)
        assert k.leaves_invariant(a @ b)
        assert k.leaves_invariant(rng.uniform(0.0, 5.0) * a)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=2, max_size=2))
def test_orthant_vector_le_matches_componentwise(entries):
    k = orthant(2)
    x = np.array(entries)
    assert k.vector_le(np.zeros(2), x) == bool(np.all(x >= -k.tol))


def test_dimension_mismatch():
    k = orthant(3)
    with pytest.raises(DimensionMismatchError):
        k.contains_vector([1.0, 2.0])
    with pytest.raises(DimensionMismatchError):
        k.leaves_invariant(np.eye(2))


def test_cone_is_immutable():
    k = orthant(2)
    with pytest.raises(AttributeError):
        k.tol = 5.0
    with pytest.raises(ValueError):
        k.generators[0, 0] = 7.0
