"""
Dense tensors and the multi-index linearization convention.

Element (i_1, ..., i_N) of a tensor of shape (I_1, ..., I_N) sits at flat offset
i_N + i_{N-1} I_N + ... + i_1 (I_2 ... I_N): the last index runs fastest, which is
numpy's C order. Scalars are order-0 tensors with an empty shape and one value.
"""
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from shared.config.loader import get_numerics_config
from shared.errors import (
    ElementCountOverflowError,
    IndexOutOfRangeError,
    MemoryCapExceededError,
    ShapeMismatchError,
)

FLOAT_BYTES = 8
MAX_ELEMENTS = 2**63 - 1

ArrayLike = Union["DenseTensor", np.ndarray, Sequence, float]


def reserve_elements(count: int, what: str = "dense tensor") -> int:
    """
    Check that ``count`` doubles may be allocated.

    Raises:
        ElementCountOverflowError: count exceeds 2**63 - 1
        MemoryCapExceededError: count * 8 bytes exceeds the configured cap
    """
    numerics = get_numerics_config()
    if count > min(MAX_ELEMENTS, numerics.max_elements):
        raise ElementCountOverflowError(f"{what} has {count} elements")
    requested = count * FLOAT_BYTES
    if requested > numerics.memory_cap_bytes:
        raise MemoryCapExceededError(what, requested, numerics.memory_cap_bytes)
    return count


@dataclass(frozen=True)
class Shape:
    """Mode sizes I_1..I_N of a tensor; order 0 is a scalar."""
    dims: Tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        for mode, size in enumerate(dims, start=1):
            if size < 1:
                raise ShapeMismatchError(f"mode {mode} has size {size}; sizes must be >= 1")
        if math.prod(dims) > MAX_ELEMENTS:
            raise ElementCountOverflowError(f"shape {dims} exceeds 2**63 - 1 elements")
        object.__setattr__(self, "dims", dims)

    @property
    def order(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return math.prod(self.dims)

    def __len__(self) -> int:
        return len(self.dims)

    def __iter__(self) -> Iterator[int]:
        return iter(self.dims)

    def __getitem__(self, item):
        return self.dims[item]

    def check_index(self, idx: Sequence[int]) -> Tuple[int, ...]:
        idx = tuple(int(i) for i in idx)
        if len(idx) != self.order:
            raise ShapeMismatchError(
                f"index has {len(idx)} entries, tensor has order {self.order}"
            )
        for mode, (i, size) in enumerate(zip(idx, self.dims), start=1):
            if not 0 <= i < size:
                raise IndexOutOfRangeError(mode, i, size)
        return idx


def flatten_index(shape: Union[Shape, Sequence[int]], idx: Sequence[int]) -> int:
    """Flat offset of a 0-based multi-index (last index fastest)."""
    shape = shape if isinstance(shape, Shape) else Shape(tuple(shape))
    idx = shape.check_index(idx)
    if shape.order == 0:
        return 0
    return int(np.ravel_multi_index(idx, shape.dims))


def unflatten_index(shape: Union[Shape, Sequence[int]], offset: int) -> Tuple[int, ...]:
    """Inverse of :func:`flatten_index`."""
    shape = shape if isinstance(shape, Shape) else Shape(tuple(shape))
    offset = int(offset)
    if not 0 <= offset < shape.size:
        raise IndexOutOfRangeError(0, offset, shape.size)
    if shape.order == 0:
        return ()
    return tuple(int(i) for i in np.unravel_index(offset, shape.dims))


class DenseTensor:
    """Immutable double-precision tensor stored in linearization order."""

    __slots__ = ("_array", "_shape")

    def __init__(self, values: ArrayLike, shape: Optional[Sequence[int]] = None):
        if isinstance(values, DenseTensor):
            values = values.array
        array = np.array(values, dtype=np.float64, order="C", copy=True)
        if shape is not None:
            target = Shape(tuple(shape))
            if array.size != target.size:
                raise ShapeMismatchError(
                    f"{array.size} values cannot fill shape {target.dims}"
                )
            array = array.reshape(target.dims)
        self._shape = Shape(array.shape)
        reserve_elements(self._shape.size)
        array.setflags(write=False)
        self._array = array

    @classmethod
    def scalar(cls, value: float) -> "DenseTensor":
        return cls(np.asarray(float(value)))

    @classmethod
    def zeros(cls, shape: Sequence[int]) -> "DenseTensor":
        shape = Shape(tuple(shape))
        reserve_elements(shape.size)
        return cls(np.zeros(shape.dims))

    @classmethod
    def ones(cls, shape: Sequence[int]) -> "DenseTensor":
        shape = Shape(tuple(shape))
        reserve_elements(shape.size)
        return cls(np.ones(shape.dims))

    @property
    def shape(self) -> Shape:
        return self._shape

    @property
    def dims(self) -> Tuple[int, ...]:
        return self._shape.dims

    @property
    def order(self) -> int:
        return self._shape.order

    @property
    def size(self) -> int:
        return self._shape.size

    @property
    def array(self) -> np.ndarray:
        """Read-only ndarray view."""
        return self._array

    @property
    def nbytes(self) -> int:
        return self._array.nbytes

    def vectorize(self) -> np.ndarray:
        """vec(x) in linearization order."""
        return self._array.reshape(-1)

    def entry(self, idx: Sequence[int]) -> float:
        return float(self._array[self._shape.check_index(idx)])

    def item(self) -> float:
        if self.size != 1:
            raise ShapeMismatchError(f"tensor of shape {self.dims} is not a scalar")
        return float(self._array.reshape(-1)[0])

    def norm(self) -> float:
        """Frobenius norm."""
        return float(np.linalg.norm(self._array.reshape(-1)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseTensor):
            return NotImplemented
        return self.dims == other.dims and bool(np.array_equal(self._array, other._array))

    __hash__ = None

    def __repr__(self) -> str:
        return f"DenseTensor(dims={self.dims})"


def as_array(x: ArrayLike) -> np.ndarray:
    """Float64 ndarray view of a tensor-like operand."""
    if isinstance(x, DenseTensor):
        return x.array
    return np.asarray(x, dtype=np.float64)


def random_dense(shape: Sequence[int], rng: np.random.Generator) -> DenseTensor:
    """Entries drawn uniformly from [-1, 1]."""
    shape = Shape(tuple(shape))
    reserve_elements(shape.size)
    return DenseTensor(rng.uniform(-1.0, 1.0, size=shape.dims))
