"""
Polynomial ODE data model: x' = F_1 x + F_2 x^[2] + ... + F_k x^[k]
"""
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from polylift.errors import DegreeZeroTerm, DimensionMismatch, ExponentLengthMismatch, ModelError
from polylift.tensor import (
    SparseMatrix,
    Vector,
    check_size,
    kron_power_vec,
    sparse_matrix,
    sup_norm_mat,
    zeros,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Monomial:
    """coeff * x_1^e_1 * ... * x_n^e_n"""

    coeff: float
    exponents: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))
        object.__setattr__(self, "coeff", float(self.coeff))
        if any(e < 0 for e in self.exponents):
            raise ModelError(f"negative exponent in {self.exponents}")
        if self.degree < 1:
            raise DegreeZeroTerm(f"constant term {self.coeff!r} violates f(0) = 0")
        if not np.isfinite(self.coeff) or self.coeff == 0.0:
            raise ModelError(f"monomial coefficient must be finite and nonzero, got {self.coeff!r}")

    @property
    def degree(self) -> int:
        return sum(self.exponents)


def canonical_word(exponents: Sequence[int]) -> Tuple[int, ...]:
    """Lexicographically smallest word whose letter multiset matches the exponents"""
    return tuple(v for v, e in enumerate(exponents) for _ in range(e))


def word_index(word: Sequence[int], n: int) -> int:
    """Row-major flat index of a word over {0..n-1}"""
    index = 0
    for letter in word:
        index = index * n + letter
    return index


def word_of_index(index: int, n: int, length: int) -> Tuple[int, ...]:
    """Inverse of word_index for words of the given length"""
    letters = []
    for _ in range(length):
        index, letter = divmod(index, n)
        letters.append(letter)
    return tuple(reversed(letters))


@dataclass(frozen=True, eq=False)
class PolyODE:
    """
    Polynomial vector field with f(0) = 0.

    F[j-1] is the n x n**j coefficient matrix of the degree-j part. Systems
    produced by compile_system have a nonzero top matrix; the quadratic form
    produced by a reduction may carry a zero F_2 (see carleman.reduce_quadratic).
    """

    n: int
    F: Tuple[SparseMatrix, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ModelError(f"state dimension must be positive, got {self.n}")
        if not self.F:
            raise ModelError("a system needs at least the linear coefficient matrix")
        matrices = tuple(sp.csr_matrix(f, dtype=float) for f in self.F)
        for j, f in enumerate(matrices, start=1):
            if f.shape != (self.n, self.n**j):
                raise DimensionMismatch(
                    f"F_{j} must have shape {self.n}x{self.n**j}, got {f.shape[0]}x{f.shape[1]}"
                )
        object.__setattr__(self, "F", matrices)

    @property
    def k(self) -> int:
        """Degree"""
        return len(self.F)

    def coefficient(self, j: int) -> SparseMatrix:
        """F_j for j >= 1, the zero matrix beyond the degree"""
        if j < 1:
            raise ValueError(f"degree index must be >= 1, got {j}")
        if j > self.k:
            return zeros(self.n, self.n**j)
        return self.F[j - 1]

    def rhs(self, x: Vector) -> Vector:
        """Evaluate sum_j F_j x^[j]"""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise DimensionMismatch(f"state must have dimension {self.n}, got shape {x.shape}")
        out = np.zeros(self.n)
        for j, f in enumerate(self.F, start=1):
            if f.nnz:
                out += f @ kron_power_vec(x, j)
        return out

    def monomials(self) -> List[List[Monomial]]:
        """Per-equation monomial lists (inverse of compile_system for canonical inputs)"""
        collected: List[Dict[Tuple[int, ...], float]] = [defaultdict(float) for _ in range(self.n)]
        for j, f in enumerate(self.F, start=1):
            coo = f.tocoo()
            for r, c, v in zip(coo.row, coo.col, coo.data):
                exponents = [0] * self.n
                for letter in word_of_index(int(c), self.n, j):
                    exponents[letter] += 1
                collected[r][tuple(exponents)] += float(v)
        result = []
        for terms in collected:
            ordered = sorted(terms.items(), key=lambda item: (sum(item[0]), tuple(-e for e in item[0])))
            result.append([Monomial(c, e) for e, c in ordered if c != 0.0])
        return result


def compile_system(rhs: Sequence[Sequence[Monomial]], n: int) -> PolyODE:
    """
    Compile per-equation monomial lists into coefficient matrices.

    A degree-j monomial in equation r adds its coefficient to F_j at row r and
    the column of its canonical (lexicographically smallest) word; duplicate
    columns of x^[j] stay zero.

    Args:
        rhs: One monomial list per state variable
        n: State dimension

    Returns:
        PolyODE whose degree is the highest degree with a surviving coefficient
    """
    if n < 1:
        raise ModelError(f"state dimension must be positive, got {n}")
    if len(rhs) != n:
        raise DimensionMismatch(f"expected {n} equations, got {len(rhs)}")

    accumulated: Dict[Tuple[int, int, int], float] = defaultdict(float)
    for row, terms in enumerate(rhs):
        for mono in terms:
            if len(mono.exponents) != n:
                raise ExponentLengthMismatch(
                    f"equation {row + 1}: exponent vector {mono.exponents} has length "
                    f"{len(mono.exponents)}, expected {n}"
                )
            column = word_index(canonical_word(mono.exponents), n)
            accumulated[(mono.degree, row, column)] += mono.coeff

    surviving = {key: value for key, value in accumulated.items() if value != 0.0}
    k = max((degree for degree, _, _ in surviving), default=1)
    matrices = []
    for j in range(1, k + 1):
        check_size(n, n**j)
        entries = [(row, col, value) for (degree, row, col), value in surviving.items() if degree == j]
        matrices.append(sparse_matrix(n, n**j, sorted(entries)))

    ode = PolyODE(n=n, F=tuple(matrices))
    logger.debug("Compiled system n=%d k=%d nnz=%s", n, k, [f.nnz for f in ode.F])
    return ode


def degree_norms(ode: PolyODE) -> Tuple[float, ...]:
    """(||F_1||, ..., ||F_k||) in the sup norm"""
    return tuple(sup_norm_mat(f) for f in ode.F)
