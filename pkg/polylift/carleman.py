"""
Transfer matrices, truncated Carleman assembly and the degree-k to quadratic
reduction.

The transfer matrix A^i_{i+j-1} = sum_{nu=1}^{i} I^{⊗(nu-1)} ⊗ F_j ⊗ I^{⊗(i-nu)}
maps the block x^[i+j-1] into the derivative of x^[i]. Blocks of the lifted
state are ordered y_1 = x, y_2 = x^[2], ...; block i has size n**i.
"""
import logging
from dataclasses import dataclass
from itertools import accumulate
from typing import List, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from polylift.errors import DimensionMismatch
from polylift.models.ode import PolyODE, degree_norms
from polylift.tensor import (
    SparseMatrix,
    Vector,
    check_size,
    identity,
    kron,
    kron_power_vec,
    sup_norm_mat,
    zeros,
)

logger = logging.getLogger(__name__)


def block_sizes(n: int, N: int) -> List[int]:
    """Sizes n, n^2, ..., n^N"""
    return [n**i for i in range(1, N + 1)]


def block_offsets(n: int, N: int) -> List[int]:
    """Start index of each block y_1..y_N (prefix sums of the block sizes)"""
    return list(accumulate([0] + block_sizes(n, N)[:-1]))


def lifted_dimension(n: int, N: int) -> int:
    """n + n^2 + ... + n^N = (n^(N+1) - n)/(n - 1) for n > 1"""
    return sum(block_sizes(n, N))


def transfer_matrix(ode: PolyODE, i: int, j: int, limit: Optional[int] = None) -> SparseMatrix:
    """
    Transfer matrix A^i_{i+j-1}

    Args:
        ode: Polynomial system
        i: Block index, i >= 1
        j: Degree of the contributing coefficient matrix, 1 <= j <= k

    Returns:
        Sparse matrix of shape n^i x n^(i+j-1)
    """
    if i < 1:
        raise ValueError(f"block index must be >= 1, got {i}")
    if not 1 <= j <= ode.k:
        raise ValueError(f"degree index must lie in 1..{ode.k}, got {j}")
    n = ode.n
    rows, cols = n**i, n ** (i + j - 1)
    check_size(rows, cols, limit)

    f = ode.coefficient(j)
    if f.nnz == 0:
        return zeros(rows, cols)

    total = zeros(rows, cols)
    for nu in range(1, i + 1):
        term = kron(kron(identity(n ** (nu - 1)), f, limit), identity(n ** (i - nu)), limit)
        total = total + term
    total = sp.csr_matrix(total)
    total.eliminate_zeros()
    return total


@dataclass(frozen=True, eq=False)
class CarlemanSystem:
    """Truncated lift dy/dt = A_N y of order N"""

    N: int
    n: int
    k: int
    matrix: SparseMatrix
    block_offsets: Tuple[int, ...]
    y0: Vector

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def block(self, y: Vector, i: int) -> Vector:
        """Block y_i of a lifted vector"""
        if not 1 <= i <= self.N:
            raise ValueError(f"block index must lie in 1..{self.N}, got {i}")
        start = self.block_offsets[i - 1]
        return np.asarray(y)[..., start:start + self.n**i]


def lift_state(x: Vector, N: int, limit: Optional[int] = None) -> Vector:
    """Concatenation (x, x^[2], ..., x^[N])"""
    if N < 1:
        raise ValueError(f"truncation order must be >= 1, got {N}")
    x = np.asarray(x, dtype=float).ravel()
    return np.concatenate([kron_power_vec(x, i, limit) for i in range(1, N + 1)])


def assemble(ode: PolyODE, x0: Vector, N: int, limit: Optional[int] = None) -> CarlemanSystem:
    """
    Assemble the Carleman matrix truncated at order N (null closure).

    Block (i, i+j) holds A^i_{i+j} for 0 <= j <= min(k-1, N-i); blocks that
    would reach beyond order N are dropped.
    """
    if N < 1:
        raise ValueError(f"truncation order must be >= 1, got {N}")
    x0 = np.asarray(x0, dtype=float).ravel()
    if x0.size != ode.n:
        raise DimensionMismatch(f"x0 has dimension {x0.size}, system has n={ode.n}")

    n = ode.n
    dim = lifted_dimension(n, N)
    check_size(dim, dim, limit)

    blocks: List[List[Optional[SparseMatrix]]] = [[None] * N for _ in range(N)]
    for i in range(1, N + 1):
        for j in range(0, min(ode.k - 1, N - i) + 1):
            blocks[i - 1][i + j - 1] = transfer_matrix(ode, i, j + 1, limit)

    matrix = sp.bmat(blocks, format="csr")
    matrix.eliminate_zeros()
    system = CarlemanSystem(
        N=N,
        n=n,
        k=ode.k,
        matrix=matrix,
        block_offsets=tuple(block_offsets(n, N)),
        y0=lift_state(x0, N, limit),
    )
    logger.info(f"✅ Assembled Carleman matrix N={N}: dimension {dim}, nnz {matrix.nnz}")
    return system


@dataclass(frozen=True, eq=False)
class QuadraticReduction:
    """Quadratic system in x~ = (x, x^[2], ..., x^[k-1]) equivalent to a degree-k system"""

    source: PolyODE
    tilde_ode: PolyODE
    block_dims: Tuple[int, ...]
    norm_F1_tilde: float
    norm_F2_tilde: float

    @property
    def dimension(self) -> int:
        return sum(self.block_dims)

    @property
    def F1_tilde(self) -> SparseMatrix:
        return self.tilde_ode.F[0]

    @property
    def F2_tilde(self) -> SparseMatrix:
        return self.tilde_ode.coefficient(2)

    def lift(self, x: Vector) -> Vector:
        """x~ for a state x of the original system"""
        return lift_state(x, len(self.block_dims))

    def project(self, x_tilde: Vector) -> Vector:
        """First block of x~ (the original state)"""
        return np.asarray(x_tilde)[..., : self.source.n]


def reduction_norm_bounds(ode: PolyODE) -> Tuple[float, float]:
    """
    Upper bounds on ||F1~|| and ||F2~|| in terms of ||F_j||:
    max_i (k-i) sum_{j<=i} ||F_j|| and (k-1) sum_{j>=2} ||F_j||.
    Systems of degree <= 2 pass through unchanged, so their own norms are returned.
    """
    norms = degree_norms(ode)
    k = ode.k
    if k <= 2:
        return norms[0], (norms[1] if k == 2 else 0.0)
    bound_1 = max((k - i) * sum(norms[:i]) for i in range(1, k))
    bound_2 = (k - 1) * sum(norms[1:])
    return bound_1, bound_2


def reduce_quadratic(ode: PolyODE, limit: Optional[int] = None) -> QuadraticReduction:
    """
    Rewrite a degree-k system as a quadratic one in x~ = (x^[1], ..., x^[k-1]).

    F1~ is block upper triangular with blocks A^i_{i+j} (i+j <= k-1). The
    products x^[i+j] with i+j >= k are written as x~_m ⊗ x~_{k-1},
    m = i+j-k+1, and A^i_{i+j} is placed at the matching columns of
    x~ ⊗ x~. Systems with k <= 2 are returned unchanged (F2~ = 0 when k = 1).
    """
    n, k = ode.n, ode.k
    if k <= 2:
        F2 = ode.coefficient(2)
        tilde = PolyODE(n=n, F=(ode.F[0], F2))
        reduction = QuadraticReduction(
            source=ode,
            tilde_ode=tilde,
            block_dims=(n,),
            norm_F1_tilde=sup_norm_mat(ode.F[0]),
            norm_F2_tilde=sup_norm_mat(F2),
        )
        logger.info(f"✅ System already of degree {k}; identity reduction")
        return reduction

    dims = block_sizes(n, k - 1)
    offsets = block_offsets(n, k - 1)
    D = sum(dims)
    check_size(D, D * D, limit)

    linear_blocks: List[List[Optional[SparseMatrix]]] = [[None] * (k - 1) for _ in range(k - 1)]
    rows_q, cols_q, vals_q = [], [], []
    last = n ** (k - 1)
    for i in range(1, k):
        for j in range(0, k):
            a = transfer_matrix(ode, i, j + 1, limit)
            if i + j <= k - 1:
                linear_blocks[i - 1][i + j - 1] = a
                continue
            if a.nnz == 0:
                continue
            m = i + j - k + 1
            coo = a.tocoo()
            # column c of x^[m+k-1] = x~_m ⊗ x~_{k-1} splits as (p, q)
            p, q = np.divmod(coo.col.astype(np.int64), last)
            rows_q.append(coo.row.astype(np.int64) + offsets[i - 1])
            cols_q.append((offsets[m - 1] + p) * D + offsets[k - 2] + q)
            vals_q.append(coo.data)

    F1_tilde = sp.bmat(linear_blocks, format="csr")
    F1_tilde.eliminate_zeros()
    if vals_q:
        F2_tilde = sp.coo_matrix(
            (np.concatenate(vals_q), (np.concatenate(rows_q), np.concatenate(cols_q))),
            shape=(D, D * D),
        ).tocsr()
        F2_tilde.eliminate_zeros()
    else:
        F2_tilde = zeros(D, D * D)

    reduction = QuadraticReduction(
        source=ode,
        tilde_ode=PolyODE(n=D, F=(F1_tilde, F2_tilde)),
        block_dims=tuple(dims),
        norm_F1_tilde=sup_norm_mat(F1_tilde),
        norm_F2_tilde=sup_norm_mat(F2_tilde),
    )
    logger.info(
        f"✅ Reduced degree-{k} system to quadratic form: D={D}, "
        f"||F1~||={reduction.norm_F1_tilde:.6g}, ||F2~||={reduction.norm_F2_tilde:.6g}"
    )
    return reduction
