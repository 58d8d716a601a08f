"""
Arithmetic on tensor trains and operator application.

Merged bonds put the first factor slowest: for Kronecker-type couplings the
operator (or bra) index comes first, for direct sums the x block comes first.
No operation here rounds its result.
"""
from enum import Enum
from typing import List

import numpy as np

from services.tensor_core.operations import Variant, direct_sum, kron
from services.tt_format.cores import TTCore, TTTensor
from services.tt_linops.matrix_tt import MTTCore, TTMatrix
from shared.errors import ShapeMismatchError
from shared.utils.logger import get_logger

logger = get_logger(__name__)


class Strategy(str, Enum):
    """How chains of core-contraction matrices are evaluated."""
    BOUNDARY = "boundary"  # running boundary tensor, no coupling matrices formed
    EXPLICIT = "explicit"  # multiply the coupling matrices themselves


def _require_same_dims(x: TTTensor, y: TTTensor, op: str):
    if x.dims != y.dims:
        raise ShapeMismatchError(f"{op}: mode sizes differ ({x.dims} vs {y.dims})")


def tt_add(x: TTTensor, y: TTTensor) -> TTTensor:
    """
    Sum of two tensor trains.

    The first cores are joined by a mode-3 direct sum, the middle cores by a
    mode-2-bar direct sum and the last cores by a mode-1 direct sum, so every bond
    rank becomes R^x_n + R^y_n.
    """
    _require_same_dims(x, y, "tt_add")
    order = x.order
    if order == 1:
        return TTTensor([TTCore(x[0].data + y[0].data)])

    cores: List[TTCore] = []
    for n, (xc, yc) in enumerate(zip(x, y)):
        if n == 0:
            merged = direct_sum(xc.data, yc.data, Variant.MODE, 3)
        elif n == order - 1:
            merged = direct_sum(xc.data, yc.data, Variant.MODE, 1)
        else:
            merged = direct_sum(xc.data, yc.data, Variant.MODE_BAR, 2)
        cores.append(TTCore(merged.array))
    return TTTensor(cores)


def tt_hadamard(x: TTTensor, y: TTTensor) -> TTTensor:
    """Entrywise product; core n is the mode-2-bar Kronecker product of the cores."""
    _require_same_dims(x, y, "tt_hadamard")
    return TTTensor([TTCore(kron(xc.data, yc.data, Variant.MODE_BAR, 2).array) for xc, yc in zip(x, y)])


def _core_array(core) -> np.ndarray:
    return core.data if isinstance(core, (TTCore, MTTCore)) else np.asarray(core, dtype=np.float64)


def core_contraction(x, y) -> np.ndarray:
    """
    Sum over i of X_i ⊗ Y_i.

    Args:
        x: Core (or order-3 array) of shape Rx_left x I x Rx_right
        y: Core of shape Ry_left x I x Ry_right

    Returns:
        (Rx_left Ry_left) x (Rx_right Ry_right) matrix
    """
    xa, ya = _core_array(x), _core_array(y)
    if xa.shape[1] != ya.shape[1]:
        raise ShapeMismatchError(
            f"core contraction: physical sizes differ ({xa.shape[1]} vs {ya.shape[1]})"
        )
    coupled = np.einsum("aib,cid->acbd", xa, ya)
    return coupled.reshape(xa.shape[0] * ya.shape[0], xa.shape[2] * ya.shape[2])


def tt_dot(x: TTTensor, y: TTTensor, strategy: Strategy = Strategy.BOUNDARY) -> float:
    """
    Inner product <x, y> as the product of the core contractions.

    The boundary strategy carries an Rx x Ry matrix from left to right and costs
    O(N I R^3).
    """
    _require_same_dims(x, y, "tt_dot")
    if Strategy(strategy) is Strategy.EXPLICIT:
        acc = np.ones((1, 1))
        for xc, yc in zip(x, y):
            acc = acc @ core_contraction(xc, yc)
        return float(acc[0, 0])

    boundary = np.ones((1, 1))
    for xc, yc in zip(x, y):
        partial = np.tensordot(boundary, xc.data, axes=([0], [0]))
        boundary = np.tensordot(partial, yc.data, axes=([0, 1], [0, 1]))
    return float(boundary[0, 0])


def apply_core(a_core, x_core) -> np.ndarray:
    """
    Operator core acting on a TT-core: slices Z_i = sum over j of A_{i,j} ⊗ X_j.

    Args:
        a_core: R_left x I x J x R_right operator core
        x_core: R'_left x J x R'_right tensor core

    Returns:
        (R_left R'_left) x I x (R_right R'_right) array
    """
    aa, xa = _core_array(a_core), _core_array(x_core)
    if aa.shape[2] != xa.shape[1]:
        raise ShapeMismatchError(
            f"operator input size {aa.shape[2]} does not match core mode size {xa.shape[1]}"
        )
    coupled = np.einsum("aijb,cjd->acibd", aa, xa)
    return coupled.reshape(aa.shape[0] * xa.shape[0], aa.shape[1], aa.shape[3] * xa.shape[2])


def check_operator_fits(a: TTMatrix, x: TTTensor, op: str):
    if a.order != x.order:
        raise ShapeMismatchError(f"{op}: operator order {a.order} vs tensor order {x.order}")
    for mode, (cols, size) in enumerate(zip(a.col_dims, x.dims), start=1):
        if cols != size:
            raise ShapeMismatchError(
                f"{op}: mode {mode} operator input size {cols} vs tensor mode size {size}"
            )


def ttm_apply(a: TTMatrix, x: TTTensor) -> TTTensor:
    """Matrix-by-vector product in TT form; bond ranks multiply."""
    check_operator_fits(a, x, "ttm_apply")
    result = TTTensor([TTCore(apply_core(ac, xc)) for ac, xc in zip(a, x)])
    logger.debug("ttm_apply_complete", ranks=list(result.ranks))
    return result


def _sandwich_step(boundary: np.ndarray, bra: np.ndarray, op: np.ndarray, ket: np.ndarray) -> np.ndarray:
    # boundary indices (bra bond, operator bond, ket bond)
    return np.einsum("pqr,pis,qijt,rju->stu", boundary, bra, op, ket, optimize=True)


def sandwich_chain(
    a: TTMatrix,
    bras: List[np.ndarray],
    kets: List[np.ndarray],
    strategy: Strategy = Strategy.BOUNDARY,
) -> float:
    """
    Evaluate the chain of <bra(n), A(n)(ket(n))>_C coupling matrices.

    Each coupling matrix has shape R_{n-1}(R'_{n-1})^2 x R_n(R'_n)^2 with the bra
    bond first and the operator bond second.
    """
    if Strategy(strategy) is Strategy.EXPLICIT:
        acc = np.ones((1, 1))
        for bra, ac, ket in zip(bras, a, kets):
            coupling = core_contraction(bra, apply_core(ac, ket))
            acc = acc @ coupling
        return float(acc[0, 0])

    boundary = np.ones((1, 1, 1))
    for bra, ac, ket in zip(bras, a, kets):
        boundary = _sandwich_step(boundary, _core_array(bra), ac.data, _core_array(ket))
    return float(boundary[0, 0, 0])


def quadratic_form(x: TTTensor, a: TTMatrix, strategy: Strategy = Strategy.BOUNDARY) -> float:
    """x^T A x for an operator that is square in every mode."""
    for mode, (rows, cols) in enumerate(zip(a.row_dims, a.col_dims), start=1):
        if rows != cols:
            raise ShapeMismatchError(f"quadratic form: mode {mode} is not square ({rows} x {cols})")
    check_operator_fits(a, x, "quadratic_form")
    cores = [core.data for core in x]
    return sandwich_chain(a, cores, cores, strategy)

