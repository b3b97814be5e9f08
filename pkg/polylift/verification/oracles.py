"""
Brute-force reference implementations of the machinery behind the error
bounds: path sums of transfer matrices, Taylor coefficients of lifted
blocks, the nested exponential integral and the coefficient bound.

Everything here is exhaustive and independent of the closed forms it is
compared with.
"""
import logging
import math
from itertools import combinations
from typing import Dict, Optional, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.integrate import cumulative_simpson

from polylift.carleman import transfer_matrix
from polylift.errors import NotQuadratic
from polylift.models.ode import PolyODE
from polylift.tensor import (
    SparseMatrix,
    Vector,
    as_sparse,
    identity,
    kron_power_vec,
    sup_norm_mat,
    zeros,
)

logger = logging.getLogger(__name__)


def _require_quadratic(ode: PolyODE) -> None:
    if ode.k != 2:
        raise NotQuadratic(f"path sums are defined for quadratic systems, got degree {ode.k}")


def path_sum(ode: PolyODE, i: int, nu: int, j: int) -> SparseMatrix:
    """
    C^(nu)_{i,i+j}: sum over all paths i = a_1 <= ... <= a_{nu+1} = i+j with
    unit or zero steps of A^{a_1}_{a_2} A^{a_2}_{a_3} ... A^{a_nu}_{a_{nu+1}}.

    Args:
        ode: Quadratic system
        i: Starting block, i >= 1
        nu: Number of factors (derivative order), nu >= 0
        j: Number of unit steps, 0 <= j <= nu

    Returns:
        Matrix of shape n^i x n^(i+j)
    """
    _require_quadratic(ode)
    if i < 1 or nu < 0 or not 0 <= j <= nu:
        raise ValueError(f"need i >= 1 and 0 <= j <= nu, got i={i}, nu={nu}, j={j}")
    n = ode.n
    if nu == 0:
        return identity(n**i)

    transfers: Dict[Tuple[int, int], SparseMatrix] = {}

    def step_matrix(level: int, jump: int) -> SparseMatrix:
        key = (level, jump)
        if key not in transfers:
            transfers[key] = transfer_matrix(ode, level, jump + 1)
        return transfers[key]

    total = zeros(n**i, n ** (i + j))
    for jumps in combinations(range(nu), j):
        jump_set = set(jumps)
        level = i
        product = identity(n**i)
        for position in range(nu):
            jump = 1 if position in jump_set else 0
            product = product @ step_matrix(level, jump)
            level += jump
        total = total + product
    return sp.csr_matrix(total)


def taylor_coefficient(ode: PolyODE, x0: Vector, i: int, nu: int) -> Vector:
    """nu-th time derivative of x^[i] at t = 0: sum_{j=0}^{nu} C^(nu)_{i,i+j} x0^[i+j]"""
    return truncated_taylor_coefficient(ode, x0, i, nu, N=None)


def truncated_taylor_coefficient(ode: PolyODE, x0: Vector, i: int, nu: int, N: Optional[int] = None) -> Vector:
    """Same sum as taylor_coefficient restricted to j <= N - i (truncated lift of order N)"""
    _require_quadratic(ode)
    x0 = np.asarray(x0, dtype=float).ravel()
    top = nu if N is None else min(nu, N - i)
    result = np.zeros(ode.n**i)
    for j in range(0, top + 1):
        result += path_sum(ode, i, nu, j) @ kron_power_vec(x0, i + j)
    return result


def nested_integral_quadrature(N: int, a: float, t: float, nodes: int = 2001) -> float:
    """
    N-fold nested integral
        int_0^t ... int_0^{s_2} int_0^{s_1} exp(a(-N s_0 + s_1 + ... + s_N)) ds_0 ... ds_{N-1}
    with s_N = t, evaluated level by level with cumulative composite Simpson
    quadrature on a shared grid.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    s = np.linspace(0.0, t, nodes)
    if a == 0.0:
        # polynomial integrand: every level integrates the previous one
        inner = cumulative_simpson(np.ones_like(s), x=s, initial=0.0)
        for _ in range(N - 1):
            inner = cumulative_simpson(inner, x=s, initial=0.0)
        return float(inner[-1])

    inner = cumulative_simpson(np.exp(-a * N * s), x=s, initial=0.0)
    for _ in range(N - 1):
        inner = cumulative_simpson(np.exp(a * s) * inner, x=s, initial=0.0)
    return float(np.exp(a * t) * inner[-1])


def nested_integral_closed_form(N: int, a: float, t: float) -> float:
    """(e^{a t} - 1)^N / (N! a^N), or t^N / N! at a = 0"""
    if a == 0.0:
        return t**N / math.factorial(N)
    return (math.expm1(a * t) / a) ** N / math.factorial(N)


def coefficient_bound(i: int, nu: int, j: int, norm_F1: float, norm_F2: float) -> float:
    """
    ||F1||^{nu-j} ||F2||^j binom(i+j-1, j) sum_k binom(j, k) (-1)^{j-k} (i+k)^nu,
    an upper bound on ||C^(nu)_{i,i+j}||. The alternating sum is exact integer arithmetic.
    """
    if i < 1 or nu < 0 or not 0 <= j <= nu:
        raise ValueError(f"need i >= 1 and 0 <= j <= nu, got i={i}, nu={nu}, j={j}")
    alternating = sum(math.comb(j, k) * (-1) ** (j - k) * (i + k) ** nu for k in range(j + 1))
    return float(norm_F1 ** (nu - j) * norm_F2**j * math.comb(i + j - 1, j) * alternating)


def random_quadratic_system(rng: np.random.Generator, n: int = 2, scale: float = 1.0) -> PolyODE:
    """
    Quadratic system with U(-1, 1) entries, rescaled so that ||F1|| and ||F2||
    do not exceed `scale`.
    """
    matrices = []
    for j in (1, 2):
        dense = rng.uniform(-1.0, 1.0, size=(n, n**j))
        norm = np.abs(dense).sum(axis=1).max()
        if norm > scale:
            dense *= scale / norm
        matrices.append(as_sparse(dense))
    ode = PolyODE(n=n, F=tuple(matrices))
    logger.debug("Random quadratic system: norms %s", [sup_norm_mat(f) for f in ode.F])
    return ode
