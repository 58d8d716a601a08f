"""
Localized operators at one site of a tensor train.

Substituting a free core W for X(n) turns the operator into a linear map of W
(and the quadratic form into a bilinear form of two free cores). These are the
local problems of alternating sweep methods.
"""
import math

import numpy as np

from services.tensor_core.dense import DenseTensor, reserve_elements
from services.tt_format.cores import TTCore, TTTensor
from services.tt_format.evaluation import tt_to_dense
from services.tt_format.frames import frame_matrix
from services.tt_linops.arithmetic import Strategy, apply_core, check_operator_fits, sandwich_chain
from services.tt_linops.matrix_tt import TTMatrix, ttm_to_dense
from shared.errors import ShapeMismatchError, SiteOutOfRangeError


def _check_site(x: TTTensor, n: int):
    if not 1 <= n <= x.order:
        raise SiteOutOfRangeError(f"site {n} out of range 1..{x.order}")


def _check_free_core(x: TTTensor, n: int, core: np.ndarray, name: str) -> np.ndarray:
    array = core.data if isinstance(core, TTCore) else np.asarray(core, dtype=np.float64)
    expected = x[n - 1].shape
    if array.shape != expected:
        raise ShapeMismatchError(f"{name} has shape {array.shape}, site {n} expects {expected}")
    return array


def localized_map_apply(a: TTMatrix, x: TTTensor, n: int, w) -> DenseTensor:
    """
    A applied to x with core n replaced by ``w``.

    Args:
        a: Operator whose input modes match x
        x: Tensor train supplying the fixed cores
        n: Site, 1 <= n <= N
        w: Free core of shape R'_{n-1} x J_n x R'_n

    Returns:
        Dense tensor of shape I_1 x ... x I_N
    """
    check_operator_fits(a, x, "localized_map_apply")
    _check_site(x, n)
    free = _check_free_core(x, n, w, "w")
    cores = [
        TTCore(apply_core(ac, free if k == n - 1 else xc.data))
        for k, (ac, xc) in enumerate(zip(a, x))
    ]
    return tt_to_dense(TTTensor(cores))


def localized_bilinear_form(a: TTMatrix, x: TTTensor, n: int, y, w,
                            strategy: Strategy = Strategy.BOUNDARY) -> float:
    """
    Bilinear form of the free cores ``y`` (bra) and ``w`` (ket) at site n.

    Equals vec(y)^T (X^{!=n})^T A X^{!=n} vec(w).
    """
    check_operator_fits(a, x, "localized_bilinear_form")
    for mode, (rows, cols) in enumerate(zip(a.row_dims, a.col_dims), start=1):
        if rows != cols:
            raise ShapeMismatchError(f"bilinear form: mode {mode} is not square ({rows} x {cols})")
    _check_site(x, n)
    bra_core = _check_free_core(x, n, y, "y")
    ket_core = _check_free_core(x, n, w, "w")
    bras = [bra_core if k == n - 1 else core.data for k, core in enumerate(x)]
    kets = [ket_core if k == n - 1 else core.data for k, core in enumerate(x)]
    return sandwich_chain(a, bras, kets, strategy)


def local_matrix(a: TTMatrix, x: TTTensor, n: int) -> np.ndarray:
    """Explicit A X^{!=n}; desk-scale only."""
    check_operator_fits(a, x, "local_matrix")
    _check_site(x, n)
    reserve_elements(math.prod(a.row_dims) * x[n - 1].data.size, "local matrix")
    return ttm_to_dense(a) @ frame_matrix(x, n)


def local_form_matrix(a: TTMatrix, x: TTTensor, n: int) -> np.ndarray:
    """Explicit (X^{!=n})^T A X^{!=n}; desk-scale only."""
    check_operator_fits(a, x, "local_form_matrix")
    _check_site(x, n)
    frame = frame_matrix(x, n)
    return frame.T @ (ttm_to_dense(a) @ frame)
