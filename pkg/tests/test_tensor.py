"""
Tests for Kronecker algebra and norms
"""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from polylift.errors import AssemblyLimitExceeded, DimensionMismatch, NonSquareMatrix
from polylift.tensor import (
    as_sparse,
    identity,
    kron,
    kron_power_vec,
    log_norm,
    sparse_matrix,
    sup_norm_mat,
    sup_norm_vec,
)

entries = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


def dense_matrices(max_side=4, square=False):
    @st.composite
    def build(draw):
        rows = draw(st.integers(1, max_side))
        cols = rows if square else draw(st.integers(1, max_side))
        return draw(arrays(np.float64, (rows, cols), elements=entries))
    return build()


def test_kron_entry_layout():
    a = as_sparse([[1.0, 2.0], [0.0, 3.0]])
    b = as_sparse([[0.0, 5.0]])
    product = kron(a, b).toarray()
    assert product.shape == (2, 4)
    assert product.tolist() == [[0.0, 5.0, 0.0, 10.0], [0.0, 0.0, 0.0, 15.0]]


def test_kron_drops_zero_products():
    a = as_sparse([[1.0, 0.0]])
    b = as_sparse([[0.0, 2.0]])
    assert kron(a, b).nnz == 1


def test_kron_size_guard():
    a = identity(100)
    with pytest.raises(AssemblyLimitExceeded) as excinfo:
        kron(a, a, limit=10_000 - 1)
    assert excinfo.value.rows == 10_000
    assert kron(a, a, limit=10**8).shape == (10_000, 10_000)


def test_kron_size_guard_from_settings(monkeypatch):
    from polylift.config import reset_settings

    monkeypatch.setenv("POLYLIFT_MAX_INDEX_SPACE", "15")
    reset_settings()
    with pytest.raises(AssemblyLimitExceeded):
        kron(identity(2), identity(2))


def test_kron_power_vec_examples():
    x = np.array([1.0, 2.0])
    assert kron_power_vec(x, 1).tolist() == [1.0, 2.0]
    assert kron_power_vec(x, 2).tolist() == [1.0, 2.0, 2.0, 4.0]
    assert kron_power_vec(np.array([0.0, 0.5]), 2).tolist() == [0.0, 0.0, 0.0, 0.25]
    with pytest.raises(ValueError):
        kron_power_vec(x, 0)


@given(arrays(np.float64, st.integers(1, 3), elements=entries), st.integers(1, 4))
def test_kron_power_vec_recursion(x, i):
    expected = np.kron(x, kron_power_vec(x, i))
    np.testing.assert_allclose(kron_power_vec(x, i + 1), expected, rtol=1e-12, atol=0)


@given(arrays(np.float64, st.integers(1, 3), elements=entries), st.integers(1, 4))
def test_kron_power_norm_is_homogeneous(x, i):
    expected = sup_norm_vec(x) ** i
    assert sup_norm_vec(kron_power_vec(x, i)) == pytest.approx(expected, rel=1e-12, abs=1e-300)


def test_sup_norms():
    assert sup_norm_vec(np.array([0.0, -3.0, 2.0])) == 3.0
    assert sup_norm_vec(np.zeros(0)) == 0.0
    a = as_sparse([[0.0, 1.0], [-1.0, 0.6]])
    assert sup_norm_mat(a) == pytest.approx(1.6)
    assert sup_norm_mat(sparse_matrix(2, 3)) == 0.0


def test_log_norm_examples():
    assert log_norm(as_sparse([[0.0, 1.0], [-1.0, 0.6]])) == pytest.approx(1.6)
    assert log_norm(as_sparse([[-2.0, 1.0], [0.0, -3.0]])) == pytest.approx(-1.0)
    assert log_norm(as_sparse([[-1.0]])) == -1.0
    with pytest.raises(NonSquareMatrix):
        log_norm(as_sparse([[1.0, 2.0]]))


@settings(max_examples=200)
@given(dense_matrices(), dense_matrices())
def test_crossnorm(a, b):
    a, b = as_sparse(a), as_sparse(b)
    expected = sup_norm_mat(a) * sup_norm_mat(b)
    assert sup_norm_mat(kron(a, b)) == pytest.approx(expected, rel=1e-12, abs=1e-12)


@settings(max_examples=200)
@given(dense_matrices(square=True), st.integers(1, 4))
def test_log_norm_of_kron_with_identity(a, m):
    a = as_sparse(a)
    assert log_norm(kron(a, identity(m))) == pytest.approx(log_norm(a), rel=1e-12, abs=1e-12)
    assert log_norm(kron(identity(m), a)) == pytest.approx(log_norm(a), rel=1e-12, abs=1e-12)


@settings(max_examples=200)
@given(dense_matrices(square=True, max_side=3), st.data())
def test_log_norm_properties(a, data):
    b = data.draw(arrays(np.float64, a.shape, elements=entries))
    a_s, b_s = as_sparse(a), as_sparse(b)
    assert log_norm(a_s) <= sup_norm_mat(a_s) + 1e-12
    assert log_norm(a_s + b_s) <= log_norm(a_s) + log_norm(b_s) + 1e-9


@given(dense_matrices(max_side=3), dense_matrices(max_side=3), entries)
def test_kron_bilinear(a, b, scale):
    left = kron(as_sparse(scale * a), as_sparse(b)).toarray()
    right = scale * kron(as_sparse(a), as_sparse(b)).toarray()
    np.testing.assert_allclose(left, right, rtol=1e-12, atol=1e-12)


def test_sparse_matrix_validation():
    m = sparse_matrix(2, 2, [(0, 1, 2.0), (1, 0, 0.0)])
    assert m.nnz == 1
    with pytest.raises(DimensionMismatch):
        sparse_matrix(2, 2, [(2, 0, 1.0)])
    with pytest.raises(DimensionMismatch):
        sparse_matrix(2, 2, [(0, 0, 1.0), (0, 0, 2.0)])
    with pytest.raises(DimensionMismatch):
        sparse_matrix(2, 2, [(0, 0, float("nan"))])
    with pytest.raises(DimensionMismatch):
        sparse_matrix(0, 2)
