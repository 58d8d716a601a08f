"""TT-cores and the tensor-train container."""
from enum import Enum
from typing import Iterator, List, Sequence, Tuple, Union

import numpy as np

from services.tensor_core.dense import Shape, reserve_elements
from services.tensor_core.operations import matricize
from shared.config.loader import get_numerics_config
from shared.errors import BondMismatchError, ShapeMismatchError
from shared.utils.logger import get_logger

logger = get_logger(__name__)


class Orthogonality(str, Enum):
    """Cached orthogonality state of a core."""
    NONE = "none"
    LEFT = "left"
    RIGHT = "right"


def _gram_error(matrix: np.ndarray) -> float:
    gram = matrix @ matrix.T
    return float(np.max(np.abs(gram - np.eye(gram.shape[0])), initial=0.0))


class TTCore:
    """Order-3 core of shape R_left x I x R_right with an advisory orthogonality flag."""

    __slots__ = ("_data", "_orth")

    def __init__(self, data: np.ndarray, orth: Orthogonality = Orthogonality.NONE):
        array = np.array(data, dtype=np.float64, order="C", copy=True)
        if array.ndim != 3:
            raise ShapeMismatchError(f"TT-core must have order 3, got {array.ndim}")
        Shape(array.shape)
        array.setflags(write=False)
        self._data = array
        self._orth = Orthogonality(orth)

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def orth(self) -> Orthogonality:
        return self._orth

    @property
    def shape(self) -> Tuple[int, int, int]:
        return self._data.shape

    @property
    def left_rank(self) -> int:
        return self._data.shape[0]

    @property
    def mode_size(self) -> int:
        return self._data.shape[1]

    @property
    def right_rank(self) -> int:
        return self._data.shape[2]

    def lateral_slice(self, i: int) -> np.ndarray:
        """G_i, the R_left x R_right matrix at physical index i."""
        return self._data[:, i, :]

    def unfold(self, mode: int) -> np.ndarray:
        """Mode-1, -2 or -3 matricization of the core."""
        return matricize(self._data, mode)

    def with_orth(self, orth: Orthogonality) -> "TTCore":
        return TTCore(self._data, orth)

    def is_left_orthogonal(self, tol: float = None) -> bool:
        """G_(3) G_(3)^T = I within tol."""
        tol = get_numerics_config().orthogonality_tolerance if tol is None else tol
        return _gram_error(self.unfold(3)) <= tol

    def is_right_orthogonal(self, tol: float = None) -> bool:
        """G_(1) G_(1)^T = I within tol."""
        tol = get_numerics_config().orthogonality_tolerance if tol is None else tol
        return _gram_error(self.unfold(1)) <= tol

    def is_all_orthogonal(self, tol: float = None) -> bool:
        """G_(n) G_(n)^T = I for all three modes."""
        tol = get_numerics_config().orthogonality_tolerance if tol is None else tol
        return all(_gram_error(self.unfold(mode)) <= tol for mode in (1, 2, 3))

    def __repr__(self) -> str:
        return f"TTCore(shape={self.shape}, orth={self._orth.value})"


CoreLike = Union[TTCore, np.ndarray]


class TTTensor:
    """
    Tensor train: cores G(1)..G(N) with R_0 = R_N = 1.

    Construction checks bond consistency and keeps the cores' flags; use
    :func:`tt_validate` to build from raw arrays with flags reset.
    """

    __slots__ = ("_cores",)

    def __init__(self, cores: Sequence[TTCore]):
        cores = tuple(cores)
        if not cores:
            raise ShapeMismatchError("a tensor train needs at least one core")
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
    def cores(self) -> Tuple[TTCore, ...]:
        return self._cores

    @property
    def order(self) -> int:
        return len(self._cores)

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(core.mode_size for core in self._cores)

    @property
    def ranks(self) -> Tuple[int, ...]:
        """Bond ranks R_1..R_{N-1}."""
        return tuple(core.right_rank for core in self._cores[:-1])

    @property
    def bond_dims(self) -> Tuple[int, ...]:
        """R_0..R_N including the unit boundaries."""
        return (1,) + tuple(core.right_rank for core in self._cores)

    @property
    def orth_flags(self) -> Tuple[Orthogonality, ...]:
        return tuple(core.orth for core in self._cores)

    @property
    def storage_bytes(self) -> int:
        return sum(core.data.nbytes for core in self._cores)

    def __len__(self) -> int:
        return len(self._cores)

    def __iter__(self) -> Iterator[TTCore]:
        return iter(self._cores)

    def __getitem__(self, n: int) -> TTCore:
        return self._cores[n]

    def __repr__(self) -> str:
        return f"TTTensor(dims={self.dims}, ranks={self.ranks})"


def tt_validate(cores: Sequence[CoreLike]) -> TTTensor:
    """Build a TTTensor from arrays or cores; orthogonality flags start as none."""
    data = [core.data if isinstance(core, TTCore) else core for core in cores]
    return TTTensor([TTCore(array) for array in data])


def tt_scalar_mul(x: TTTensor, c: float) -> TTTensor:
    """Scale the first core by ``c``; every other core is shared unchanged."""
    first = TTCore(x[0].data * float(c))
    return TTTensor((first,) + x.cores[1:])


def tt_from_vectors(vectors: Sequence[np.ndarray]) -> TTTensor:
    """Bond-1 tensor train of the outer product v(1) o ... o v(N)."""
    return tt_validate([np.asarray(v, dtype=np.float64).reshape(1, -1, 1) for v in vectors])


def random_tt(dims: Sequence[int], ranks: Sequence[int], rng: np.random.Generator) -> TTTensor:
    """
    Random tensor train with entries uniform in [-1, 1].

    Args:
        dims: Mode sizes I_1..I_N
        ranks: Bond ranks R_1..R_{N-1}
        rng: Seeded generator
    """
    dims, ranks = list(dims), list(ranks)
    if len(ranks) != len(dims) - 1:
        raise BondMismatchError(f"{len(ranks)} ranks given for {len(dims) - 1} bonds")
    bonds: List[int] = [1] + ranks + [1]
    reserve_elements(
        sum(bonds[n] * dims[n] * bonds[n + 1] for n in range(len(dims))), "random tensor train"
    )
    return tt_validate(
        [rng.uniform(-1.0, 1.0, size=(bonds[n], dims[n], bonds[n + 1])) for n in range(len(dims))]
    )
