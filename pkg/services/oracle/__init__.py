"""Brute-force references and result comparison."""
from services.oracle.reference import (
    OracleOp,
    dense_reference,
    fiber_contraction_matrix,
    fiber_hadamard_core,
    fiber_operator_core,
    fiber_quadratic_matrix,
    fiber_sum_core,
    unfolding_tail,
)
from services.oracle.report import compare, seeded_rng

__all__ = [
    "OracleOp",
    "compare",
    "dense_reference",
    "fiber_contraction_matrix",
    "fiber_hadamard_core",
    "fiber_operator_core",
    "fiber_quadratic_matrix",
    "fiber_sum_core",
    "seeded_rng",
    "unfolding_tail",
]
