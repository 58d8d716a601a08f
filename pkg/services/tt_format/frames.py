"""Frame matrices and core-based unfoldings."""
import math

import numpy as np

from services.tensor_core.dense import reserve_elements
from services.tt_format.cores import TTTensor
from services.tt_format.evaluation import left_interface, right_interface
from shared.errors import SiteOutOfRangeError
from shared.utils.logger import get_logger

logger = get_logger(__name__)


def frame_matrix(x: TTTensor, n: int, pair: bool = False) -> np.ndarray:
    """
    Frame matrix X^{!=n} = (G^{<n}_(n))^T ⊗ I_{I_n} ⊗ (G^{>n}_(1))^T.

    It maps vec(G(n)) to vec(x). With ``pair`` the identity covers sites n and
    n + 1 and the matrix maps vec(G(n) • G(n+1)) to vec(x).

    Args:
        x: Tensor train of order N
        n: Site, 1 <= n <= N (n <= N - 1 for the pair form)
        pair: Extract two neighbouring cores instead of one

    Returns:
        prod(I) x (R_{n-1} I_n R_n) matrix, or the analogous pair-form matrix
    """
    last = x.order - 1 if pair else x.order
    if not 1 <= n <= last:
        raise SiteOutOfRangeError(
            f"frame site {n} out of range 1..{last}" + (" for the pair form" if pair else "")
        )

    dims = x.dims
    left = left_interface(x, n)
    if pair:
        middle = dims[n - 1] * dims[n]
        right = right_interface(x, n + 1)
    else:
        middle = dims[n - 1]
        right = right_interface(x, n)

    rows = math.prod(dims)
    cols = left.shape[0] * middle * right.shape[0]
    reserve_elements(rows * cols, "frame matrix")
    logger.debug("frame_matrix_built", site=n, pair=pair, rows=rows, cols=cols)
    return np.kron(np.kron(left.T, np.eye(middle)), right.T)


def tt_unfolding(x: TTTensor, n: int) -> np.ndarray:
    """X_(n) assembled as G(n)_(2) (G^{<n}_(n) ⊗ G^{>n}_(1))."""
    if not 1 <= n <= x.order:
        raise SiteOutOfRangeError(f"mode {n} out of range 1..{x.order}")
    reserve_elements(math.prod(x.dims), "core-based unfolding")
    return x[n - 1].unfold(2) @ np.kron(left_interface(x, n), right_interface(x, n))
