"""
Verification namespace: brute-force oracles and the self-check suite
"""
from polylift.verification.oracles import (
    coefficient_bound,
    nested_integral_closed_form,
    nested_integral_quadrature,
    path_sum,
    random_quadratic_system,
    taylor_coefficient,
    truncated_taylor_coefficient,
)
from polylift.verification.suite import run_verification

__all__ = [
    "coefficient_bound",
    "nested_integral_closed_form",
    "nested_integral_quadrature",
    "path_sum",
    "random_quadratic_system",
    "taylor_coefficient",
    "truncated_taylor_coefficient",
    "run_verification",
]
