"""
TT-SVD, rounding and separation ranks.

Both tt_svd and tt_round split the error budget evenly over the N - 1 bonds:
each SVD may discard a tail of at most delta = epsilon / sqrt(N - 1) * ||x||_F,
which keeps the total error within epsilon * ||x||_F.
"""
from typing import List, Optional

import numpy as np
import scipy.linalg

from services.tensor_core.dense import DenseTensor, as_array
from services.tensor_core.operations import matricize
from services.tt_format.cores import Orthogonality, TTCore, TTTensor
from services.tt_format.truncation import EXACT, TruncationSpec, truncation_rank
from shared.config.loader import get_numerics_config
from shared.errors import ShapeMismatchError
from shared.utils.logger import get_logger

logger = get_logger(__name__)


def _svd(matrix: np.ndarray):
    try:
        return scipy.linalg.svd(matrix, full_matrices=False, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        logger.warning("gesdd_failed_retrying_gesvd", shape=list(matrix.shape))
        return scipy.linalg.svd(matrix, full_matrices=False, lapack_driver="gesvd")


def separation_ranks(x: DenseTensor, cutoff: Optional[float] = None) -> List[int]:
    """
    Numerical ranks S_n of the prefix unfoldings X_([n]), n = 1..N-1.

    Singular values below cutoff * sigma_max count as zero; a zero tensor has
    separation rank 0 at every bond.
    """
    cutoff = get_numerics_config().rank_cutoff if cutoff is None else cutoff
    array = as_array(x)
    ranks = []
    for n in range(1, array.ndim):
        s = scipy.linalg.svd(matricize(array, n, prefix=True), compute_uv=False)
        ranks.append(int(np.count_nonzero(s >= cutoff * s[0])) if s[0] > 0 else 0)
    return ranks


def _zero_train(dims) -> TTTensor:
    return TTTensor([TTCore(np.zeros((1, size, 1))) for size in dims])


def tt_svd(x: DenseTensor, spec: TruncationSpec = EXACT) -> TTTensor:
    """
    Decompose a dense tensor by sequential truncated SVDs of its unfoldings.

    Args:
        x: Dense tensor of order N >= 1
        spec: Tolerance and/or bond caps

    Returns:
        Tensor train whose cores 1..N-1 are left-orthogonal
    """
    array = as_array(x)
    if array.ndim == 0:
        raise ShapeMismatchError("TT-SVD needs a tensor of order >= 1")

    dims = array.shape
    order = len(dims)
    caps = spec.bond_caps(order)
    norm = float(np.linalg.norm(array.reshape(-1)))
    if norm == 0.0:
        logger.debug("tt_svd_zero_tensor", dims=list(dims))
        return _zero_train(dims)

    delta = spec.split_threshold(norm, order)
    cutoff = get_numerics_config().rank_cutoff

    cores: List[TTCore] = []
    remainder = array.reshape(1, -1)
    left_rank = 1
    for n in range(order - 1):
        u, s, vt = _svd(remainder.reshape(left_rank * dims[n], -1))
        rank = truncation_rank(s, delta, caps[n], cutoff)
        cores.append(TTCore(u[:, :rank].reshape(left_rank, dims[n], rank), Orthogonality.LEFT))
        remainder = s[:rank, None] * vt[:rank]
        left_rank = rank
    cores.append(TTCore(remainder.reshape(left_rank, dims[-1], 1)))

    result = TTTensor(cores)
    logger.debug("tt_svd_complete", dims=list(dims), ranks=list(result.ranks), epsilon=spec.epsilon)
    return result


def _right_orthogonalize_all(cores: List[np.ndarray]) -> List[np.ndarray]:
    for n in range(len(cores) - 1, 0, -1):
        left_rank, size, right_rank = cores[n].shape
        q, r = scipy.linalg.qr(cores[n].reshape(left_rank, size * right_rank).T, mode="economic")
        cores[n] = q.T.reshape(q.shape[1], size, right_rank)
        cores[n - 1] = np.tensordot(cores[n - 1], r.T, axes=([2], [0]))
    return cores


def tt_round(x: TTTensor, spec: TruncationSpec = EXACT) -> TTTensor:
    """
    Recompress a tensor train.

    A right-to-left QR sweep makes cores 2..N right-orthogonal, then a
    left-to-right SVD sweep truncates every bond with the same per-split budget
    as tt_svd. Ranks never grow.

    Args:
        x: Tensor train of order N
        spec: Tolerance and/or bond caps

    Returns:
        Tensor train whose cores 1..N-1 are left-orthogonal
    """
    order = x.order
    caps = spec.bond_caps(order)
    if order == 1:
        return TTTensor([TTCore(x[0].data)])

    cores = _right_orthogonalize_all([core.data for core in x])
    delta = spec.split_threshold(float(np.linalg.norm(cores[0])), order)
    cutoff = get_numerics_config().rank_cutoff

    for n in range(order - 1):
        left_rank, size, right_rank = cores[n].shape
        u, s, vt = _svd(cores[n].reshape(left_rank * size, right_rank))
        rank = truncation_rank(s, delta, caps[n], cutoff)
        cores[n] = u[:, :rank].reshape(left_rank, size, rank)
        cores[n + 1] = np.tensordot(s[:rank, None] * vt[:rank], cores[n + 1], axes=([1], [0]))

    flags = [Orthogonality.LEFT] * (order - 1) + [Orthogonality.NONE]
    result = TTTensor([TTCore(core, flag) for core, flag in zip(cores, flags)])
    logger.debug(
        "tt_round_complete",
        ranks_before=list(x.ranks),
        ranks_after=list(result.ranks),
        epsilon=spec.epsilon,
    )
    return result
