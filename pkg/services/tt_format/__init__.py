"""Tensor-train representation: construction, evaluation, orthogonality, rounding."""
from services.tt_format.cores import (
    Orthogonality,
    TTCore,
    TTTensor,
    random_tt,
    tt_from_vectors,
    tt_scalar_mul,
    tt_validate,
)
from services.tt_format.decomposition import separation_ranks, tt_round, tt_svd
from services.tt_format.evaluation import (
    Side,
    partial_product,
    tt_entry,
    tt_rank_one_contraction,
    tt_to_dense,
    tt_vectorize_recursive,
    tt_vectorize_strong_kron,
)
from services.tt_format.frames import frame_matrix, tt_unfolding
from services.tt_format.io import read_tt, write_tt
from services.tt_format.orthogonal import OrthMode, orthogonalize, tt_norm
from services.tt_format.truncation import TruncationSpec, truncation_rank

__all__ = [
    "OrthMode",
    "Orthogonality",
    "Side",
    "TTCore",
    "TTTensor",
    "TruncationSpec",
    "frame_matrix",
    "orthogonalize",
    "partial_product",
    "random_tt",
    "read_tt",
    "separation_ranks",
    "truncation_rank",
    "tt_entry",
    "tt_from_vectors",
    "tt_norm",
    "tt_rank_one_contraction",
    "tt_round",
    "tt_scalar_mul",
    "tt_svd",
    "tt_to_dense",
    "tt_unfolding",
    "tt_validate",
    "tt_vectorize_recursive",
    "tt_vectorize_strong_kron",
    "write_tt",
]
