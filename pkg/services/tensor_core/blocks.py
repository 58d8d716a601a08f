"""Block matrices, block order-3 tensors and the strong Kronecker product."""
from typing import Sequence, Tuple

import numpy as np

from services.tensor_core.dense import reserve_elements
from shared.errors import ShapeMismatchError


class _BlockGrid:
    """R1 x R2 grid of equally shaped dense blocks, stored as one array."""

    block_order = 0

    def __init__(self, blocks: np.ndarray):
        blocks = np.array(blocks, dtype=np.float64, order="C", copy=True)
        if blocks.ndim != 2 + self.block_order:
            raise ShapeMismatchError(
                f"{type(self).__name__} needs a {2 + self.block_order}-d block array, got {blocks.ndim}-d"
            )
        if min(blocks.shape, default=1) < 1:
            raise ShapeMismatchError(f"block grid has an empty dimension: {blocks.shape}")
        blocks.setflags(write=False)
        self._blocks = blocks

    @classmethod
    def from_grid(cls, grid: Sequence[Sequence[np.ndarray]]):
        """Build from a nested list of blocks; every block must share one shape."""
        rows = [list(row) for row in grid]
        if not rows or not rows[0]:
            raise ShapeMismatchError("block grid must be non-empty")
        width = len(rows[0])
        shape = np.shape(rows[0][0])
        for r, row in enumerate(rows):
            if len(row) != width:
                raise ShapeMismatchError(f"block row {r} has {len(row)} blocks, expected {width}")
            for c, block in enumerate(row):
                if np.shape(block) != shape:
                    raise ShapeMismatchError(
                        f"block ({r}, {c}) has shape {np.shape(block)}, expected {shape}"
                    )
        return cls(np.array(rows, dtype=np.float64))

    @property
    def blocks(self) -> np.ndarray:
        return self._blocks

    @property
    def block_rows(self) -> int:
        return self._blocks.shape[0]

    @property
    def block_cols(self) -> int:
        return self._blocks.shape[1]

    @property
    def block_shape(self) -> Tuple[int, ...]:
        return self._blocks.shape[2:]

    def block(self, r1: int, r2: int) -> np.ndarray:
        return self._blocks[r1, r2]


class BlockMatrix(_BlockGrid):
    """Grid of I1 x I2 matrices."""

    block_order = 2

    def to_dense(self) -> np.ndarray:
        """(R1 I1) x (R2 I2) matrix."""
        r1, r2, i1, i2 = self._blocks.shape
        reserve_elements(r1 * r2 * i1 * i2, "block matrix")
        return self._blocks.transpose(0, 2, 1, 3).reshape(r1 * i1, r2 * i2)

    @classmethod
    def from_dense(cls, matrix: np.ndarray, block_rows: int, block_cols: int) -> "BlockMatrix":
        matrix = np.asarray(matrix, dtype=np.float64)
        rows, cols = matrix.shape
        if rows % block_rows or cols % block_cols:
            raise ShapeMismatchError(
                f"{rows}x{cols} matrix does not split into a {block_rows}x{block_cols} grid"
            )
        i1, i2 = rows // block_rows, cols // block_cols
        return cls(matrix.reshape(block_rows, i1, block_cols, i2).transpose(0, 2, 1, 3))


class BlockTensor3(_BlockGrid):
    """Grid of I1 x I2 x I3 tensors; the third mode is not blocked."""

    block_order = 3

    def to_dense(self) -> np.ndarray:
        """(R1 I1) x (R2 I2) x I3 tensor."""
        r1, r2, i1, i2, i3 = self._blocks.shape
        reserve_elements(r1 * r2 * i1 * i2 * i3, "block tensor")
        return self._blocks.transpose(0, 2, 1, 3, 4).reshape(r1 * i1, r2 * i2, i3)

    @classmethod
    def from_dense(cls, tensor: np.ndarray, block_rows: int, block_cols: int) -> "BlockTensor3":
        tensor = np.asarray(tensor, dtype=np.float64)
        rows, cols, depth = tensor.shape
        if rows % block_rows or cols % block_cols:
            raise ShapeMismatchError(
                f"{rows}x{cols}x{depth} tensor does not split into a {block_rows}x{block_cols} grid"
            )
        i1, i2 = rows // block_rows, cols // block_cols
        return cls(
            tensor.reshape(block_rows, i1, block_cols, i2, depth).transpose(0, 2, 1, 3, 4)
        )


def strong_kron(a: _BlockGrid, b: _BlockGrid) -> _BlockGrid:
    """
    Strong Kronecker product: block (r1, r3) = sum over r2 of A[r1, r2] kron B[r2, r3].

    Args:
        a: R1 x R2 grid
        b: R2 x R3 grid of the same kind

    Returns:
        R1 x R3 grid of the same kind
    """
    if type(a) is not type(b):
        raise ShapeMismatchError(
            f"strong Kronecker operands differ in kind ({type(a).__name__} vs {type(b).__name__})"
        )
    if a.block_cols != b.block_rows:
        raise ShapeMismatchError(
            f"block grids do not chain: {a.block_cols} block columns vs {b.block_rows} block rows"
        )

    k = a.block_order
    merged = [p * q for p, q in zip(a.block_shape, b.block_shape)]
    reserve_elements(a.block_rows * b.block_cols * int(np.prod(merged)), "strong Kronecker product")

    # (R1, *sa, R3, *sb) -> (R1, R3, sa_1, sb_1, ..., sa_k, sb_k)
    summed = np.tensordot(a.blocks, b.blocks, axes=([1], [0]))
    perm = [0, 1 + k] + [
        axis for pair in zip(range(1, 1 + k), range(2 + k, 2 + 2 * k)) for axis in pair
    ]
    result = summed.transpose(perm).reshape(a.block_rows, b.block_cols, *merged)
    return type(a)(result)
