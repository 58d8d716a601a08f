"""Matrix tensor trains, TT arithmetic and localized operators."""
from services.tt_linops.arithmetic import (
    Strategy,
    apply_core,
    core_contraction,
    quadratic_form,
    sandwich_chain,
    tt_add,
    tt_dot,
    tt_hadamard,
    ttm_apply,
)
from services.tt_linops.io import read_ttm, write_ttm
from services.tt_linops.localized import (
    local_form_matrix,
    local_matrix,
    localized_bilinear_form,
    localized_map_apply,
)
from services.tt_linops.matrix_tt import (
    DenseMethod,
    MTTCore,
    TTMatrix,
    identity_ttm,
    random_ttm,
    ttm_entry,
    ttm_from_matrices,
    ttm_to_dense,
    ttm_validate,
)

__all__ = [
    "DenseMethod",
    "MTTCore",
    "Strategy",
    "TTMatrix",
    "apply_core",
    "core_contraction",
    "identity_ttm",
    "local_form_matrix",
    "local_matrix",
    "localized_bilinear_form",
    "localized_map_apply",
    "quadratic_form",
    "random_ttm",
    "read_ttm",
    "sandwich_chain",
    "tt_add",
    "tt_dot",
    "tt_hadamard",
    "ttm_apply",
    "ttm_entry",
    "ttm_from_matrices",
    "ttm_to_dense",
    "ttm_validate",
    "write_ttm",
]
