"""
Kronecker algebra and the two norms (sup norm, logarithmic sup norm) used by
every bound in the package.

Matrices are scipy CSR matrices, vectors are 1-D float64 numpy arrays. Word
indices are flattened in row-major order: the word (w_1, ..., w_i) over the
alphabet {0..n-1} sits at sum_m w_m * n**(i-m).
"""
import logging
from functools import reduce
from typing import Iterable, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from polylift.config import get_settings
from polylift.errors import AssemblyLimitExceeded, DimensionMismatch, NonSquareMatrix

logger = logging.getLogger(__name__)

SparseMatrix = sp.csr_matrix
Vector = np.ndarray


def check_size(rows: int, cols: int, limit: Optional[int] = None) -> None:
    """Raise AssemblyLimitExceeded when rows * cols exceeds the index space"""
    limit = get_settings().max_index_space if limit is None else limit
    if rows * cols > limit:
        raise AssemblyLimitExceeded(rows, cols, limit)


def sparse_matrix(
    rows: int,
    cols: int,
    entries: Iterable[Tuple[int, int, float]] = (),
) -> SparseMatrix:
    """
    Build a CSR matrix from (row, col, value) triplets.

    Args:
        rows: Number of rows (positive)
        cols: Number of columns (positive)
        entries: Zero-based triplets, at most one per position

    Returns:
        CSR matrix with exact zeros dropped
    """
    if rows < 1 or cols < 1:
        raise DimensionMismatch(f"matrix shape must be positive, got {rows}x{cols}")
    triplets = list(entries)
    seen = set()
    for r, c, v in triplets:
        if not (0 <= r < rows and 0 <= c < cols):
            raise DimensionMismatch(f"entry ({r}, {c}) outside a {rows}x{cols} matrix")
        if (r, c) in seen:
            raise DimensionMismatch(f"duplicate entry at ({r}, {c})")
        if not np.isfinite(v):
            raise DimensionMismatch(f"non-finite value at ({r}, {c})")
        seen.add((r, c))

    if triplets:
        r_idx, c_idx, vals = zip(*triplets)
    else:
        r_idx, c_idx, vals = (), (), ()
    matrix = sp.coo_matrix(
        (np.asarray(vals, dtype=float), (np.asarray(r_idx, dtype=np.int64), np.asarray(c_idx, dtype=np.int64))),
        shape=(rows, cols),
    ).tocsr()
    matrix.eliminate_zeros()
    return matrix


def as_sparse(dense) -> SparseMatrix:
    """Convert a dense array-like (2-D) to CSR, dropping exact zeros"""
    matrix = sp.csr_matrix(np.atleast_2d(np.asarray(dense, dtype=float)))
    matrix.eliminate_zeros()
    return matrix


def identity(m: int) -> SparseMatrix:
    """Sparse identity of order m"""
    return sp.identity(m, dtype=float, format="csr")


def zeros(rows: int, cols: int) -> SparseMatrix:
    """Sparse all-zero matrix with an explicit shape"""
    return sp.csr_matrix((rows, cols), dtype=float)


def kron(a: SparseMatrix, b: SparseMatrix, limit: Optional[int] = None) -> SparseMatrix:
    """
    Sparse Kronecker product a ⊗ b.

    Entry (b.rows*r + v, b.cols*s + w) equals a[r, s] * b[v, w]; zero products
    are not stored.
    """
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    check_size(rows, cols, limit)
    product = sp.kron(a, b, format="csr")
    product.eliminate_zeros()
    return product


def kron_power_vec(x: Vector, i: int, limit: Optional[int] = None) -> Vector:
    """
    Kronecker power x^[i] = x ⊗ ... ⊗ x (i factors).

    Args:
        x: Vector of dimension n
        i: Power, i >= 1

    Returns:
        Vector of dimension n**i, component at the flat index of word w equal
        to prod_m x[w_m]
    """
    if i < 1:
        raise ValueError(f"Kronecker power must be >= 1, got {i}")
    x = np.asarray(x, dtype=float).ravel()
    check_size(x.size**i, 1, limit)
    return reduce(np.kron, [x] * i)


def sup_norm_vec(x: Vector) -> float:
    """max_i |x_i| (0 for the zero vector)"""
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return 0.0
    return float(np.max(np.abs(x)))


def _abs_row_sums(a: SparseMatrix) -> np.ndarray:
    return np.asarray(abs(a).sum(axis=1)).ravel()


def sup_norm_mat(a: SparseMatrix) -> float:
    """Induced sup norm: maximum absolute row sum"""
    sums = _abs_row_sums(sp.csr_matrix(a))
    return float(sums.max()) if sums.size else 0.0


def log_norm(a: SparseMatrix) -> float:
    """
    Logarithmic norm associated with the sup norm,
    mu(A) = max_i (a_ii + sum_{j != i} |a_ij|). May be negative.
    """
    a = sp.csr_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise NonSquareMatrix(f"logarithmic norm needs a square matrix, got {a.shape[0]}x{a.shape[1]}")
    diag = a.diagonal()
    off_diag = _abs_row_sums(a) - np.abs(diag)
    return float(np.max(diag + off_diag))
