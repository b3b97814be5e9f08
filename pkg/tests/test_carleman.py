"""
Tests for transfer matrices, Carleman assembly and quadratic reduction
"""
import numpy as np
import pytest
import scipy.sparse as sp

from polylift.carleman import (
    assemble,
    block_offsets,
    block_sizes,
    lift_state,
    lifted_dimension,
    reduce_quadratic,
    reduction_norm_bounds,
    transfer_matrix,
)
from polylift.errors import AssemblyLimitExceeded, DimensionMismatch
from polylift.models.ode import PolyODE, degree_norms
from polylift.sim import integrate_nonlinear
from polylift.tensor import identity, kron, kron_power_vec, sup_norm_mat
from polylift.verification.suite import random_sparse
from tests.conftest import scalar_system


def test_block_layout():
    assert block_sizes(2, 3) == [2, 4, 8]
    assert block_offsets(2, 3) == [0, 2, 6]
    assert lifted_dimension(2, 3) == 14
    assert lifted_dimension(1, 5) == 5


def test_transfer_matrix_scalar():
    ode = scalar_system(3.0)
    assert transfer_matrix(ode, 2, 1).toarray().tolist() == [[6.0]]


def test_transfer_matrix_first_level_is_coefficient(vanderpol):
    for j in (1, 2, 3):
        assert (transfer_matrix(vanderpol, 1, j) != vanderpol.coefficient(j)).nnz == 0


def test_transfer_matrix_vanderpol(vanderpol):
    F1 = vanderpol.F[0]
    a22 = transfer_matrix(vanderpol, 2, 1)
    expected = kron(F1, identity(2)) + kron(identity(2), F1)
    assert a22.shape == (4, 4)
    assert abs(a22 - expected).max() == 0.0
    assert sup_norm_mat(a22) == pytest.approx(3.2)


@pytest.mark.parametrize("seed", range(10))
def test_transfer_matrix_recurrence_and_norm_bound(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    ode = PolyODE(n=n, F=tuple(random_sparse(rng, n, n**j) for j in (1, 2, 3)))
    norms = degree_norms(ode)
    for j in (1, 2, 3):
        previous = transfer_matrix(ode, 1, j)
        for i in range(2, 5):
            current = transfer_matrix(ode, i, j)
            expected = kron(previous, identity(n)) + kron(identity(n ** (i - 1)), ode.F[j - 1])
            assert current.shape == (n**i, n ** (i + j - 1))
            assert abs(current - expected).max() <= 1e-15
            assert sup_norm_mat(current) <= i * norms[j - 1] * (1 + 1e-12)
            previous = current


def test_assemble_scalar_example():
    a, b = -1.5, 0.25
    system = assemble(scalar_system(a, b), [0.3], 3)
    assert system.matrix.toarray().tolist() == [[a, b, 0.0], [0.0, 2 * a, 2 * b], [0.0, 0.0, 3 * a]]
    np.testing.assert_allclose(system.y0, [0.3, 0.09, 0.027])


def test_assemble_vanderpol(vanderpol, vanderpol_x0):
    system = assemble(vanderpol, vanderpol_x0, 3)
    assert system.dimension == 14
    assert system.block_offsets == (0, 2, 6)
    dense = system.matrix.toarray()
    # block (1, 3) holds F3, block (2, 2) the Kronecker sum of F1
    np.testing.assert_array_equal(dense[0:2, 6:14], vanderpol.F[2].toarray())
    np.testing.assert_array_equal(dense[2:6, 2:6], transfer_matrix(vanderpol, 2, 1).toarray())
    # block upper triangular: nothing below the diagonal band
    assert np.all(dense[2:, :2] == 0.0) and np.all(dense[6:, :6] == 0.0)
    np.testing.assert_allclose(system.block(system.y0, 3), kron_power_vec(vanderpol_x0, 3))


def test_assemble_order_one_is_linear_part(vanderpol, vanderpol_x0):
    system = assemble(vanderpol, vanderpol_x0, 1)
    assert (system.matrix != vanderpol.F[0]).nnz == 0
    np.testing.assert_array_equal(system.y0, vanderpol_x0)


def test_assemble_errors(vanderpol):
    with pytest.raises(DimensionMismatch):
        assemble(vanderpol, [1.0, 2.0, 3.0], 2)
    with pytest.raises(AssemblyLimitExceeded):
        assemble(vanderpol, [0.0, 0.5], 6, limit=100)
    with pytest.raises(ValueError):
        assemble(vanderpol, [0.0, 0.5], 0)


def test_null_closure_only_changes_last_band(vanderpol, vanderpol_x0):
    for N in (2, 3, 4, 5):
        small = assemble(vanderpol, vanderpol_x0, N - 1).matrix
        large = assemble(vanderpol, vanderpol_x0, N).matrix
        d = small.shape[0]
        assert abs(large[:d, :d] - small).max() == 0.0


def test_lift_state():
    np.testing.assert_array_equal(lift_state([0.0, 0.5], 2), [0.0, 0.5, 0.0, 0.0, 0.0, 0.25])
    assert not np.any(lift_state(np.zeros(3), 3))
    x = np.array([0.4, -0.7])
    lifted = lift_state(x, 4)
    for i, (start, size) in enumerate(zip(block_offsets(2, 4), block_sizes(2, 4)), start=1):
        assert np.max(np.abs(lifted[start:start + size])) == pytest.approx(0.7**i)


def test_lift_dynamics_consistency(vanderpol, vanderpol_x0):
    h = 1e-3
    traj = integrate_nonlinear(vanderpol, vanderpol_x0, 0.5, h)
    for step in (100, 250, 400):
        x = traj.states[step]
        for i in (1, 2, 3):
            derivative = (
                kron_power_vec(traj.states[step + 1], i) - kron_power_vec(traj.states[step - 1], i)
            ) / (2 * h)
            lifted_rhs = sum(
                transfer_matrix(vanderpol, i, j + 1) @ kron_power_vec(x, i + j)
                for j in range(vanderpol.k)
            )
            np.testing.assert_allclose(derivative, lifted_rhs, atol=1e-5)


def test_reduce_vanderpol(vanderpol):
    reduction = reduce_quadratic(vanderpol)
    assert reduction.block_dims == (2, 4)
    assert reduction.dimension == 6
    assert reduction.F1_tilde.shape == (6, 6)
    assert reduction.F2_tilde.shape == (6, 36)
    assert reduction.norm_F1_tilde == pytest.approx(3.2)
    assert reduction.norm_F2_tilde == pytest.approx(1.2)
    assert reduction.norm_F1_tilde == sup_norm_mat(reduction.F1_tilde)
    bound_F1, bound_F2 = reduction_norm_bounds(vanderpol)
    assert bound_F1 == pytest.approx(3.2)
    assert bound_F2 == pytest.approx(1.2)


def test_reduce_scalar_cubic():
    a, c = -0.5, 2.0
    reduction = reduce_quadratic(scalar_system(a, 0.0, c))
    assert reduction.F1_tilde.toarray().tolist() == [[a, 0.0], [0.0, 2 * a]]
    F2 = reduction.F2_tilde.toarray()
    assert F2.shape == (2, 4)
    # x~ ⊗ x~ = (x*x, x*x^2, x^2*x, x^2*x^2)
    expected = np.zeros((2, 4))
    expected[0, 1] = c
    expected[1, 3] = 2 * c
    np.testing.assert_array_equal(F2, expected)


def test_reduce_quadratic_passthrough(logistic):
    reduction = reduce_quadratic(logistic)
    assert reduction.tilde_ode.k == 2
    assert (reduction.F1_tilde != logistic.F[0]).nnz == 0
    assert (reduction.F2_tilde != logistic.F[1]).nnz == 0


def test_reduce_linear_has_zero_quadratic_part():
    reduction = reduce_quadratic(scalar_system(-1.0))
    assert reduction.F2_tilde.shape == (1, 1)
    assert reduction.F2_tilde.nnz == 0
    assert reduction.norm_F2_tilde == 0.0


def test_reduced_rhs_matches_lifted_derivative(rng):
    """x~' = F1~ x~ + F2~ (x~ ⊗ x~) reproduces d/dt (x, x^[2], x^[3]) for random quartic systems"""
    n = 2
    ode = PolyODE(n=n, F=tuple(random_sparse(rng, n, n**j) for j in (1, 2, 3, 4)))
    reduction = reduce_quadratic(ode)
    for _ in range(5):
        x = rng.uniform(-1, 1, size=n)
        x_tilde = reduction.lift(x)
        reduced = reduction.tilde_ode.rhs(x_tilde)
        exact = np.concatenate([
            sum(transfer_matrix(ode, i, j + 1) @ kron_power_vec(x, i + j) for j in range(ode.k))
            for i in (1, 2, 3)
        ])
        np.testing.assert_allclose(reduced, exact, rtol=1e-12, atol=1e-12)
    bound_F1, bound_F2 = reduction_norm_bounds(ode)
    assert reduction.norm_F1_tilde <= bound_F1 * (1 + 1e-12)
    assert reduction.norm_F2_tilde <= bound_F2 * (1 + 1e-12)


def test_reduction_faithfulness(vanderpol, vanderpol_x0):
    reduction = reduce_quadratic(vanderpol)
    original = integrate_nonlinear(vanderpol, vanderpol_x0, 2.0, 1e-3)
    reduced = integrate_nonlinear(reduction.tilde_ode, reduction.lift(vanderpol_x0), 2.0, 1e-3)
    gap = np.max(np.abs(reduction.project(reduced.states) - original.states))
    assert gap < 1e-6
