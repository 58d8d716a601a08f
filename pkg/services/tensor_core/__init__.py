"""Dense tensors, linearization and multilinear operations."""
from services.tensor_core.blocks import BlockMatrix, BlockTensor3, strong_kron
from services.tensor_core.dense import (
    DenseTensor,
    Shape,
    as_array,
    flatten_index,
    random_dense,
    reserve_elements,
    unflatten_index,
)
from services.tensor_core.io import read_dense, write_dense
from services.tensor_core.operations import (
    Variant,
    contracted_product,
    direct_sum,
    hadamard,
    kron,
    matricize,
    mode_n_product,
    outer,
    self_contraction,
    tucker_operator,
)

__all__ = [
    "BlockMatrix",
    "BlockTensor3",
    "DenseTensor",
    "Shape",
    "Variant",
    "as_array",
    "contracted_product",
    "direct_sum",
    "flatten_index",
    "hadamard",
    "kron",
    "matricize",
    "mode_n_product",
    "outer",
    "random_dense",
    "read_dense",
    "reserve_elements",
    "self_contraction",
    "strong_kron",
    "tucker_operator",
    "unflatten_index",
    "write_dense",
]
