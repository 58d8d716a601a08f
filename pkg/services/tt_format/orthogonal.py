"""Left/right orthogonalization sweeps and mixed-canonical forms."""
from enum import Enum
from typing import List, Tuple

import numpy as np
import scipy.linalg

from services.tt_format.cores import Orthogonality, TTCore, TTTensor
from shared.config.loader import get_numerics_config
from shared.errors import SiteOutOfRangeError
from shared.utils.logger import get_logger

logger = get_logger(__name__)


class OrthMode(str, Enum):
    """Which side of site n to orthogonalize."""
    LEFT = "left"      # cores 1..n-1 left-orthogonal
    RIGHT = "right"    # cores n+1..N right-orthogonal
    MIXED = "mixed"    # both


def _positive_qr(matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Economic QR with a non-negative diagonal in R."""
    q, r = scipy.linalg.qr(matrix, mode="economic")
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs, signs[:, None] * r


def _left_step(cores: List[TTCore], k: int):
    core = cores[k]
    left_rank, size, right_rank = core.shape
    q, r = _positive_qr(core.data.reshape(left_rank * size, right_rank))
    cores[k] = TTCore(q.reshape(left_rank, size, q.shape[1]), Orthogonality.LEFT)
    cores[k + 1] = TTCore(np.tensordot(r, cores[k + 1].data, axes=([1], [0])))


def _right_step(cores: List[TTCore], k: int):
    core = cores[k]
    left_rank, size, right_rank = core.shape
    q, r = _positive_qr(core.data.reshape(left_rank, size * right_rank).T)
    cores[k] = TTCore(q.T.reshape(q.shape[1], size, right_rank), Orthogonality.RIGHT)
    cores[k - 1] = TTCore(np.tensordot(cores[k - 1].data, r.T, axes=([2], [0])))


def orthogonalize(x: TTTensor, mode: OrthMode, n: int) -> TTTensor:
    """
    Orthogonalize the cores on one or both sides of site n.

    Cores whose flag already matches and whose Gram check passes are kept as they
    are, so re-orthogonalizing a canonical tensor returns it unchanged.

    Args:
        x: Tensor train of order N
        mode: LEFT (cores 1..n-1), RIGHT (cores n+1..N) or MIXED (both)
        n: Site, 1 <= n <= N

    Returns:
        Tensor train with the same values and ranks no larger than before
    """
    mode = OrthMode(mode)
    order = x.order
    if not 1 <= n <= order:
        raise SiteOutOfRangeError(f"orthogonalization site {n} out of range 1..{order}")

    tol = get_numerics_config().orthogonality_tolerance
    cores = list(x.cores)
    swept = 0

    if mode in (OrthMode.LEFT, OrthMode.MIXED):
        for k in range(n - 1):
            if cores[k].orth is Orthogonality.LEFT and cores[k].is_left_orthogonal(tol):
                continue
            _left_step(cores, k)
            swept += 1

    if mode in (OrthMode.RIGHT, OrthMode.MIXED):
        for k in range(order - 1, n - 1, -1):
            if cores[k].orth is Orthogonality.RIGHT and cores[k].is_right_orthogonal(tol):
                continue
            _right_step(cores, k)
            swept += 1

    logger.debug("orthogonalize_complete", mode=mode.value, site=n, cores_updated=swept)
    return TTTensor(cores)


def tt_norm(x: TTTensor) -> float:
    """Frobenius norm from the last core of the left-orthogonalized train."""
    canonical = orthogonalize(x, OrthMode.LEFT, x.order)
    return float(np.linalg.norm(canonical[x.order - 1].data))
