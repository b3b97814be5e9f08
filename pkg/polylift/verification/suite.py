"""
Self-check suite run by `polylift verify`: algebraic identities of the
Kronecker algebra, transfer-matrix properties, the nested-integral closed form and path-sum bounds,
each evaluated on random cases drawn from a seeded generator.
"""
import logging
from typing import Callable, List

import numpy as np
import scipy.sparse as sp

from polylift.carleman import transfer_matrix
from polylift.models.ode import PolyODE, degree_norms
from polylift.models.schemas import CheckResult, VerificationReport
from polylift.tensor import SparseMatrix, as_sparse, identity, kron, log_norm, sup_norm_mat
from polylift.verification.oracles import (
    coefficient_bound,
    nested_integral_closed_form,
    nested_integral_quadrature,
    path_sum,
    random_quadratic_system,
)

logger = logging.getLogger(__name__)

RTOL = 1e-12


def random_sparse(rng: np.random.Generator, rows: int, cols: int, density: float = 0.5) -> SparseMatrix:
    dense = rng.uniform(-1.0, 1.0, size=(rows, cols))
    dense[rng.random(size=(rows, cols)) > density] = 0.0
    return as_sparse(dense)


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= RTOL * max(1.0, abs(a), abs(b))


def _same(a: SparseMatrix, b: SparseMatrix) -> bool:
    if a.shape != b.shape:
        return False
    diff = abs(sp.csr_matrix(a) - sp.csr_matrix(b))
    scale = max(1.0, abs(a).max() if a.nnz else 0.0)
    return diff.nnz == 0 or diff.max() <= RTOL * scale


def check_crossnorm(rng: np.random.Generator, cases: int) -> CheckResult:
    failures = 0
    for _ in range(cases):
        a = random_sparse(rng, *rng.integers(1, 5, size=2))
        b = random_sparse(rng, *rng.integers(1, 5, size=2))
        if not _close(sup_norm_mat(kron(a, b)), sup_norm_mat(a) * sup_norm_mat(b)):
            failures += 1
    return CheckResult(name="sup-norm crossnorm", cases=cases, failures=failures)


def check_log_norm_kron(rng: np.random.Generator, cases: int) -> CheckResult:
    failures = 0
    for _ in range(cases):
        size = int(rng.integers(1, 5))
        a = random_sparse(rng, size, size, density=0.8)
        m = int(rng.integers(1, 5))
        if not _close(log_norm(kron(a, identity(m))), log_norm(a)):
            failures += 1
    return CheckResult(name="log norm of A ⊗ I", cases=cases, failures=failures)


def check_transfer_matrices(rng: np.random.Generator, cases: int) -> CheckResult:
    """Kronecker-sum recurrence and the bound ||A^i_{i+j-1}|| <= i ||F_j||"""
    failures = 0
    for _ in range(cases):
        n = int(rng.integers(1, 3))
        k = int(rng.integers(1, 4))
        ode = PolyODE(n=n, F=tuple(random_sparse(rng, n, n**j) for j in range(1, k + 1)))
        norms = degree_norms(ode)
        for j in range(1, k + 1):
            previous = transfer_matrix(ode, 1, j)
            for i in range(2, 5):
                current = transfer_matrix(ode, i, j)
                expected = kron(previous, identity(n)) + kron(identity(n ** (i - 1)), ode.F[j - 1])
                if not _same(current, expected):
                    failures += 1
                if sup_norm_mat(current) > i * norms[j - 1] * (1 + RTOL):
                    failures += 1
                previous = current
    return CheckResult(name="transfer matrices", cases=cases, failures=failures)


def check_nested_integral() -> CheckResult:
    """Quadrature of the nested exponential integral against its closed form"""
    failures, worst = 0, 0.0
    grid = [(N, a, t) for N in (1, 2, 3) for a in (-1.0, 0.0, 0.5, 2.0) for t in (0.5, 1.0)]
    for N, a, t in grid:
        gap = abs(nested_integral_quadrature(N, a, t) - nested_integral_closed_form(N, a, t))
        worst = max(worst, gap)
        if gap >= 1e-6:
            failures += 1
    return CheckResult(name="nested integral", cases=len(grid), failures=failures, detail=f"max gap {worst:.2e}")


def check_path_sums(rng: np.random.Generator, cases: int) -> CheckResult:
    """Path-sum recurrence and domination by the coefficient bound, i <= 3, nu <= 5"""
    failures, worst = 0, 0.0
    for _ in range(cases):
        ode = random_quadratic_system(rng, n=2)
        norm_F1, norm_F2 = degree_norms(ode)
        for i in range(1, 4):
            sums = {(0, 0): path_sum(ode, i, 0, 0)}
            for nu in range(1, 6):
                for j in range(0, nu + 1):
                    c = path_sum(ode, i, nu, j)
                    sums[(nu, j)] = c
                    bound = coefficient_bound(i, nu, j, norm_F1, norm_F2)
                    norm = sup_norm_mat(c)
                    if bound > 0:
                        worst = max(worst, norm / bound)
                    if norm > bound * (1 + RTOL) + 1e-15:
                        failures += 1

                    expected = sp.csr_matrix(c.shape)
                    if j >= 1:
                        expected = expected + sums[(nu - 1, j - 1)] @ transfer_matrix(ode, i + j - 1, 2)
                    if j <= nu - 1:
                        expected = expected + sums[(nu - 1, j)] @ transfer_matrix(ode, i + j, 1)
                    if not _same(c, expected):
                        failures += 1
    return CheckResult(
        name="path sums", cases=cases, failures=failures, detail=f"max ||C|| / bound {worst:.3f}"
    )


def run_verification(seed: int = 0, cases: int = 100) -> VerificationReport:
    """
    Run every check with a generator seeded by `seed`

    Args:
        seed: Random seed
        cases: Random cases per check (path sums use at most 100)

    Returns:
        VerificationReport; `passed` is True when no check failed
    """
    rng = np.random.default_rng(seed)
    checks: List[Callable[[], CheckResult]] = [
        lambda: check_crossnorm(rng, cases),
        lambda: check_log_norm_kron(rng, cases),
        lambda: check_transfer_matrices(rng, cases),
        check_nested_integral,
        lambda: check_path_sums(rng, min(cases, 100)),
    ]
    report = VerificationReport(seed=seed)
    for check in checks:
        result = check()
        report.checks.append(result)
        if result.failures:
            logger.error(f"❌ {result.name}: {result.failures} failure(s) in {result.cases} case(s)")
        else:
            logger.info(f"✅ {result.name}: {result.cases} case(s) passed {result.detail}")
    return report
