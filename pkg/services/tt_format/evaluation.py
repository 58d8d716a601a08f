"""
Evaluating a tensor train: single entries, partial products, full densification
and the equivalent vectorization paths.
"""
import math
from enum import Enum
from typing import Sequence

import numpy as np

from services.tensor_core.blocks import BlockMatrix, strong_kron
from services.tensor_core.dense import DenseTensor, Shape, reserve_elements
from services.tensor_core.operations import contracted_product, matricize, mode_n_product
from services.tt_format.cores import TTTensor
from shared.errors import ShapeMismatchError, SiteOutOfRangeError


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


def tt_entry(x: TTTensor, idx: Sequence[int]) -> float:
    """x(i_1..i_N) as the product of lateral slices G(1)_{i_1} ... G(N)_{i_N}."""
    idx = Shape(x.dims).check_index(idx)
    row = x[0].lateral_slice(idx[0])
    for core, i in zip(x.cores[1:], idx[1:]):
        row = row @ core.lateral_slice(i)
    return float(row[0, 0])


def partial_product(x: TTTensor, side: Side, n: int) -> DenseTensor:
    """
    Partial contracted product of the cores.

    Args:
        x: Tensor train of order N
        side: LEFT gives G^{<=n} of shape I_1 x ... x I_n x R_n (0 <= n <= N);
            RIGHT gives G^{>=n} of shape R_{n-1} x I_n x ... x I_N (1 <= n <= N + 1)
        n: Site; the empty products (left 0, right N + 1) are the scalar 1

    Returns:
        Dense partial product
    """
    side = Side(side)
    order = x.order

    if side is Side.LEFT:
        if not 0 <= n <= order:
            raise SiteOutOfRangeError(f"left partial product site {n} out of range 0..{order}")
        if n == 0:
            return DenseTensor.scalar(1.0)
        reserve_elements(math.prod(x.dims[:n]) * x.bond_dims[n], "left partial product")
        acc = DenseTensor(x[0].data[0])
        for core in x.cores[1:n]:
            acc = contracted_product(acc, core.data)
        return acc

    if not 1 <= n <= order + 1:
        raise SiteOutOfRangeError(f"right partial product site {n} out of range 1..{order + 1}")
    if n == order + 1:
        return DenseTensor.scalar(1.0)
    reserve_elements(x.bond_dims[n - 1] * math.prod(x.dims[n - 1:]), "right partial product")
    acc = DenseTensor(x[order - 1].data[..., 0])
    for core in reversed(x.cores[n - 1:order - 1]):
        acc = contracted_product(core.data, acc)
    return acc


def tt_to_dense(x: TTTensor) -> DenseTensor:
    """Full tensor by left-to-right contracted products."""
    reserve_elements(math.prod(x.dims), "densified tensor train")
    return DenseTensor(partial_product(x, Side.LEFT, x.order).array.reshape(x.dims))


def tt_vectorize_strong_kron(x: TTTensor) -> np.ndarray:
    """
    vec(x) as the strong Kronecker product of the block matrices whose
    (r_{n-1}, r_n) block is the column fiber g(n)_{r_{n-1}, r_n}.
    """
    reserve_elements(math.prod(x.dims), "strong Kronecker vectorization")
    grids = [BlockMatrix(core.data.transpose(0, 2, 1)[..., None]) for core in x]
    acc = grids[0]
    for grid in grids[1:]:
        acc = strong_kron(acc, grid)
    return acc.block(0, 0).reshape(-1)


def tt_vectorize_recursive(x: TTTensor, side: Side = Side.LEFT) -> np.ndarray:
    """
    vec(x) through explicit Kronecker factors.

    LEFT applies vec(G^{<=n}) = (I ⊗ G(n)_(1)^T) vec(G^{<=n-1}) for n = 2..N;
    RIGHT applies vec(G^{>=n}) = (G(n)_(3)^T ⊗ I) vec(G^{>=n+1}) for n = N-1..1.
    """
    side = Side(side)
    dims = x.dims
    if side is Side.LEFT:
        vec = x[0].data.reshape(-1)
        for n in range(1, x.order):
            eye = np.eye(math.prod(dims[:n]))
            factor_t = x[n].unfold(1).T
            reserve_elements(eye.shape[0] ** 2 * factor_t.size, "recursive vectorization factor")
            vec = np.kron(eye, factor_t) @ vec
        return vec

    vec = x[x.order - 1].data.reshape(-1)
    for n in range(x.order - 2, -1, -1):
        eye = np.eye(math.prod(dims[n + 1:]))
        factor_t = x[n].unfold(3).T
        reserve_elements(eye.shape[0] ** 2 * factor_t.size, "recursive vectorization factor")
        vec = np.kron(factor_t, eye) @ vec
    return vec


def tt_rank_one_contraction(x: TTTensor, vectors: Sequence[np.ndarray]) -> float:
    """<x, u(1) o ... o u(N)> as the product of the matrices G(n) x_2 u(n)."""
    if len(vectors) != x.order:
        raise ShapeMismatchError(f"{len(vectors)} vectors given for order {x.order}")
    row = np.ones((1, 1))
    for mode, (core, u) in enumerate(zip(x, vectors), start=1):
        u = np.asarray(u, dtype=np.float64)
        if u.shape != (core.mode_size,):
            raise ShapeMismatchError(
                f"mode {mode}: vector of shape {u.shape} for mode size {core.mode_size}"
            )
        row = row @ mode_n_product(core.data, u, 2).array
    return float(row[0, 0])


def left_interface(x: TTTensor, n: int) -> np.ndarray:
    """G^{<n}_(n): the R_{n-1} x (I_1..I_{n-1}) matrix (1 x 1 for n = 1)."""
    if n == 1:
        return np.ones((1, 1))
    prefix = partial_product(x, Side.LEFT, n - 1)
    return matricize(prefix, n)


def right_interface(x: TTTensor, n: int) -> np.ndarray:
    """G^{>n}_(1): the R_n x (I_{n+1}..I_N) matrix (1 x 1 for n = N)."""
    if n == x.order:
        return np.ones((1, 1))
    return matricize(partial_product(x, Side.RIGHT, n + 1), 1)
