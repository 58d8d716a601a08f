"""
Matrix tensor trains (MPOs).

Core n has shape R_{n-1} x I_n x J_n x R_n: I_n is the output (row) mode and J_n
the input (column) mode. The dense operator has rows (i_1..i_N) and columns
(j_1..j_N), both linearized with the last index fastest.
"""
import math
from enum import Enum
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from services.tensor_core.blocks import BlockMatrix, strong_kron
from services.tensor_core.dense import DenseTensor, Shape, reserve_elements
from services.tensor_core.operations import contracted_product
from shared.errors import BondMismatchError, ShapeMismatchError


class DenseMethod(str, Enum):
    CONTRACTION = "contraction"
    STRONG_KRON = "strong_kron"
    KRON_FACTORS = "kron_factors"


class MTTCore:
    """Order-4 operator core."""

    __slots__ = ("_data",)

    def __init__(self, data: np.ndarray):
        array = np.array(data, dtype=np.float64, order="C", copy=True)
        if array.ndim != 4:
            raise ShapeMismatchError(f"matrix TT-core must have order 4, got {array.ndim}")
        Shape(array.shape)
        array.setflags(write=False)
        self._data = array

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def shape(self) -> Tuple[int, int, int, int]:
        return self._data.shape

    @property
    def left_rank(self) -> int:
        return self._data.shape[0]

    @property
    def row_size(self) -> int:
        return self._data.shape[1]

    @property
    def col_size(self) -> int:
        return self._data.shape[2]

    @property
    def right_rank(self) -> int:
        return self._data.shape[3]

    def slice(self, i: int, j: int) -> np.ndarray:
        """A_{i,j}, the R_left x R_right matrix at output i and input j."""
        return self._data[:, i, j, :]

    def __repr__(self) -> str:
        return f"MTTCore(shape={self.shape})"


class TTMatrix:
    """Operator in matrix-TT form with unit boundary ranks."""

    __slots__ = ("_cores",)

    def __init__(self, cores: Sequence[MTTCore]):
        cores = tuple(core if isinstance(core, MTTCore) else MTTCore(core) for core in cores)
        if not cores:
            raise ShapeMismatchError("a matrix tensor train needs at least one core")
        if cores[0].left_rank != 1:
            raise BondMismatchError(
                f"bond 0: first core has left rank {cores[0].left_rank}, expected 1", bond=0
            )
        if cores[-1].right_rank != 1:
            raise BondMismatchError(
                f"bond {len(cores)}: last core has right rank {cores[-1].right_rank}, expected 1",
                bond=len(cores),
            )
        for bond, (left, right) in enumerate(zip(cores[:-1], cores[1:]), start=1):
            if left.right_rank != right.left_rank:
                raise BondMismatchError(
                    f"bond {bond}: core {bond} has right rank {left.right_rank} "
                    f"but core {bond + 1} has left rank {right.left_rank}",
                    bond=bond,
                )
        self._cores = cores

    @property
    def cores(self) -> Tuple[MTTCore, ...]:
        return self._cores

    @property
    def order(self) -> int:
        return len(self._cores)

    @property
    def row_dims(self) -> Tuple[int, ...]:
        return tuple(core.row_size for core in self._cores)

    @property
    def col_dims(self) -> Tuple[int, ...]:
        return tuple(core.col_size for core in self._cores)

    @property
    def ranks(self) -> Tuple[int, ...]:
        return tuple(core.right_rank for core in self._cores[:-1])

    @property
    def storage_bytes(self) -> int:
        return sum(core.data.nbytes for core in self._cores)

    def __len__(self) -> int:
        return len(self._cores)

    def __iter__(self) -> Iterator[MTTCore]:
        return iter(self._cores)

    def __getitem__(self, n: int) -> MTTCore:
        return self._cores[n]

    def __repr__(self) -> str:
        return f"TTMatrix(rows={self.row_dims}, cols={self.col_dims}, ranks={self.ranks})"


def ttm_validate(cores: Sequence[np.ndarray]) -> TTMatrix:
    return TTMatrix([MTTCore(core) for core in cores])


def ttm_entry(a: TTMatrix, row_idx: Sequence[int], col_idx: Sequence[int]) -> float:
    """A(i, j) as the product of slices A(1)_{i_1,j_1} ... A(N)_{i_N,j_N}."""
    row_idx = Shape(a.row_dims).check_index(row_idx)
    col_idx = Shape(a.col_dims).check_index(col_idx)
    acc = np.ones((1, 1))
    for core, i, j in zip(a, row_idx, col_idx):
        acc = acc @ core.slice(i, j)
    return float(acc[0, 0])


def _dense_by_contraction(a: TTMatrix) -> np.ndarray:
    acc = DenseTensor(a[0].data[0])
    for core in a.cores[1:]:
        acc = contracted_product(acc, core.data)
    # (I_1, J_1, ..., I_N, J_N, 1) -> rows (I_1..I_N), cols (J_1..J_N)
    order = a.order
    interleaved = acc.array.reshape([size for core in a for size in (core.row_size, core.col_size)])
    perm = list(range(0, 2 * order, 2)) + list(range(1, 2 * order, 2))
    return interleaved.transpose(perm).reshape(math.prod(a.row_dims), math.prod(a.col_dims))


def _dense_by_strong_kron(a: TTMatrix) -> np.ndarray:
    acc = BlockMatrix(a[0].data.transpose(0, 3, 1, 2))
    for core in a.cores[1:]:
        acc = strong_kron(acc, BlockMatrix(core.data.transpose(0, 3, 1, 2)))
    return np.array(acc.block(0, 0))


def _dense_by_kron_factors(a: TTMatrix) -> np.ndarray:
    rows, cols = a.row_dims, a.col_dims
    result = None
    for n, core in enumerate(a):
        unfolded = core.data.reshape(core.left_rank * core.row_size, core.col_size * core.right_rank)
        left_eye = np.eye(math.prod(cols[:n]))
        right_eye = np.eye(math.prod(rows[n + 1:]))
        reserve_elements(
            (left_eye.shape[0] * right_eye.shape[0]) ** 2 * unfolded.size, "Kronecker factor"
        )
        factor = np.kron(np.kron(left_eye, unfolded), right_eye)
        result = factor if result is None else result @ factor
    return result


def ttm_to_dense(a: TTMatrix, method: DenseMethod = DenseMethod.CONTRACTION) -> np.ndarray:
    """
    Dense (prod I) x (prod J) matrix.

    Args:
        a: Matrix tensor train
        method: CONTRACTION chains contracted products of the cores; STRONG_KRON
            takes the strong Kronecker product of the block matrices with blocks
            A(n)_{r_{n-1}, r_n}; KRON_FACTORS multiplies the factors
            (I_{J_1..J_{n-1}} ⊗ A(n)_([2]) ⊗ I_{I_{n+1}..I_N})
    """
    reserve_elements(math.prod(a.row_dims) * math.prod(a.col_dims), "densified operator")
    method = DenseMethod(method)
    if method is DenseMethod.STRONG_KRON:
        return _dense_by_strong_kron(a)
    if method is DenseMethod.KRON_FACTORS:
        return _dense_by_kron_factors(a)
    return _dense_by_contraction(a)


def identity_ttm(dims: Sequence[int]) -> TTMatrix:
    """Bond-1 operator whose cores hold identity matrices."""
    return TTMatrix([MTTCore(np.eye(size).reshape(1, size, size, 1)) for size in dims])


def ttm_from_matrices(matrices: Sequence[np.ndarray]) -> TTMatrix:
    """Bond-1 operator M(1) ⊗ ... ⊗ M(N)."""
    cores: List[MTTCore] = []
    for mat in matrices:
        mat = np.asarray(mat, dtype=np.float64)
        cores.append(MTTCore(mat.reshape(1, mat.shape[0], mat.shape[1], 1)))
    return TTMatrix(cores)


def random_ttm(
    row_dims: Sequence[int],
    col_dims: Sequence[int],
    ranks: Sequence[int],
    rng: np.random.Generator,
) -> TTMatrix:
    """Random operator with entries uniform in [-1, 1]."""
    row_dims, col_dims, ranks = list(row_dims), list(col_dims), list(ranks)
    if len(row_dims) != len(col_dims):
        raise ShapeMismatchError(f"{len(row_dims)} row modes vs {len(col_dims)} column modes")
    if len(ranks) != len(row_dims) - 1:
        raise BondMismatchError(f"{len(ranks)} ranks given for {len(row_dims) - 1} bonds")
    bonds = [1] + ranks + [1]
    shapes = [(bonds[n], row_dims[n], col_dims[n], bonds[n + 1]) for n in range(len(row_dims))]
    reserve_elements(sum(math.prod(shape) for shape in shapes), "random matrix tensor train")
    return TTMatrix([MTTCore(rng.uniform(-1.0, 1.0, size=shape)) for shape in shapes])
