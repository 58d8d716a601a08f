"""
Multilinear operations on dense tensors.

Kronecker-type products merge index pairs as i*J + j (first operand slowest), the
same rule the linearization uses. Modes are numbered from 1.
"""
import math
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np

from services.tensor_core.dense import ArrayLike, DenseTensor, as_array, reserve_elements
from shared.errors import ShapeMismatchError, SiteOutOfRangeError


class Variant(str, Enum):
    """Which modes a Kronecker product or direct sum acts on."""
    FULL = "full"
    MODE = "mode"          # mode-n: all modes shared except n
    MODE_BAR = "mode-bar"  # mode-n-bar: only mode n shared


def _check_mode(n: Optional[int], order: int) -> int:
    if n is None:
        raise SiteOutOfRangeError("a mode number is required for this variant")
    if not 1 <= n <= order:
        raise SiteOutOfRangeError(f"mode {n} out of range 1..{order}")
    return n - 1


def _check_same_order(a: np.ndarray, b: np.ndarray, op: str):
    if a.ndim != b.ndim:
        raise ShapeMismatchError(f"{op}: operand orders differ ({a.ndim} vs {b.ndim})")


def _check_shared_except(a: np.ndarray, b: np.ndarray, axis: int, op: str):
    _check_same_order(a, b, op)
    for k, (i, j) in enumerate(zip(a.shape, b.shape)):
        if k != axis and i != j:
            raise ShapeMismatchError(f"{op}: mode {k + 1} sizes differ ({i} vs {j})")


def _check_shared_at(a: np.ndarray, b: np.ndarray, axis: int, op: str):
    _check_same_order(a, b, op)
    if a.shape[axis] != b.shape[axis]:
        raise ShapeMismatchError(
            f"{op}: shared mode {axis + 1} sizes differ ({a.shape[axis]} vs {b.shape[axis]})"
        )


def matricize(x: ArrayLike, n: int, prefix: bool = False) -> np.ndarray:
    """
    Mode-n matricization X_(n), or the prefix unfolding X_([n]).

    Args:
        x: Tensor of order N
        n: Mode, 1 <= n <= N
        prefix: Group modes 1..n as rows instead of mode n alone

    Returns:
        I_n x prod(other modes) matrix, or (I_1..I_n) x (I_{n+1}..I_N) for prefix
    """
    a = as_array(x)
    axis = _check_mode(n, a.ndim)
    if prefix:
        rows = math.prod(a.shape[: axis + 1])
        return a.reshape(rows, -1)
    return np.moveaxis(a, axis, 0).reshape(a.shape[axis], -1)


def _interleaved_kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    order = a.ndim
    outer_ab = np.multiply.outer(a, b)
    perm = [axis for pair in zip(range(order), range(order, 2 * order)) for axis in pair]
    return outer_ab.transpose(perm).reshape([i * j for i, j in zip(a.shape, b.shape)])


def kron(a: ArrayLike, b: ArrayLike, variant: Variant = Variant.FULL,
         n: Optional[int] = None) -> DenseTensor:
    """
    Kronecker product of two tensors.

    Args:
        a: First operand (its indices run slowest in merged modes)
        b: Second operand
        variant: FULL merges every mode pair; MODE merges only mode n and requires
            the rest to agree; MODE_BAR keeps mode n shared and merges the rest
        n: Mode for the MODE and MODE_BAR variants

    Returns:
        Product tensor
    """
    a, b = as_array(a), as_array(b)
    variant = Variant(variant)

    if variant is Variant.FULL:
        _check_same_order(a, b, "kron")
        reserve_elements(a.size * b.size, "kron result")
        return DenseTensor(_interleaved_kron(a, b))

    axis = _check_mode(n, a.ndim)
    if variant is Variant.MODE:
        _check_shared_except(a, b, axis, "mode-n kron")
        a_m, b_m = np.moveaxis(a, axis, -1), np.moveaxis(b, axis, -1)
        merged = a_m.shape[-1] * b_m.shape[-1]
        reserve_elements(math.prod(a_m.shape[:-1]) * merged, "kron result")
        fibers = (a_m[..., :, None] * b_m[..., None, :]).reshape(*a_m.shape[:-1], merged)
        return DenseTensor(np.moveaxis(fibers, -1, axis))

    _check_shared_at(a, b, axis, "mode-n-bar kron")
    reserve_elements(a.size * b.size // a.shape[axis], "kron result")
    a_m, b_m = np.moveaxis(a, axis, 0), np.moveaxis(b, axis, 0)
    slices = np.stack([_interleaved_kron(a_m[i], b_m[i]) for i in range(a_m.shape[0])])
    return DenseTensor(np.moveaxis(slices, 0, axis))


def hadamard(a: ArrayLike, b: ArrayLike) -> DenseTensor:
    """Entrywise product of equally shaped tensors."""
    a, b = as_array(a), as_array(b)
    if a.shape != b.shape:
        raise ShapeMismatchError(f"hadamard: shapes differ ({a.shape} vs {b.shape})")
    return DenseTensor(a * b)


def outer(a: ArrayLike, b: ArrayLike) -> DenseTensor:
    """Outer product; the result has order M + N."""
    a, b = as_array(a), as_array(b)
    reserve_elements(a.size * b.size, "outer product")
    return DenseTensor(np.multiply.outer(a, b))


def _block_diagonal(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.ndim == 0:
        return a + b
    out = np.zeros([i + j for i, j in zip(a.shape, b.shape)])
    out[tuple(slice(0, i) for i in a.shape)] = a
    out[tuple(slice(i, None) for i in a.shape)] = b
    return out


def direct_sum(a: ArrayLike, b: ArrayLike, variant: Variant = Variant.FULL,
               n: Optional[int] = None) -> DenseTensor:
    """
    Direct sum of two tensors.

    FULL places ``a`` in the leading corner and ``b`` in the trailing corner with
    zeros elsewhere; for order-0 operands this is addition. MODE concatenates along
    mode n. MODE_BAR takes the full direct sum of every slice at the shared mode n.
    """
    a, b = as_array(a), as_array(b)
    variant = Variant(variant)

    if variant is Variant.FULL:
        _check_same_order(a, b, "direct sum")
        reserve_elements(math.prod(i + j for i, j in zip(a.shape, b.shape)), "direct sum")
        return DenseTensor(_block_diagonal(a, b))

    axis = _check_mode(n, a.ndim)
    if variant is Variant.MODE:
        _check_shared_except(a, b, axis, "mode-n direct sum")
        return DenseTensor(np.concatenate([a, b], axis=axis))

    _check_shared_at(a, b, axis, "mode-n-bar direct sum")
    a_m, b_m = np.moveaxis(a, axis, 0), np.moveaxis(b, axis, 0)
    slices = np.stack([_block_diagonal(a_m[i], b_m[i]) for i in range(a_m.shape[0])])
    return DenseTensor(np.moveaxis(slices, 0, axis))


def mode_n_product(a: ArrayLike, operand: ArrayLike, n: int) -> DenseTensor:
    """
    Mode-n product with a matrix (J x I_n) or a vector (length I_n).

    The matrix form replaces mode n by J so that X_(n) = B A_(n); the vector form
    contracts mode n away.
    """
    a, op = as_array(a), as_array(operand)
    axis = _check_mode(n, a.ndim)
    size = a.shape[axis]

    if op.ndim == 1:
        if op.shape[0] != size:
            raise ShapeMismatchError(f"mode {n}: vector length {op.shape[0]} != {size}")
        return DenseTensor(np.tensordot(a, op, axes=([axis], [0])))
    if op.ndim == 2:
        if op.shape[1] != size:
            raise ShapeMismatchError(f"mode {n}: matrix has {op.shape[1]} columns, mode size is {size}")
        reserve_elements(a.size // size * op.shape[0], "mode-n product")
        return DenseTensor(np.moveaxis(np.tensordot(op, a, axes=([1], [axis])), 0, axis))
    raise ShapeMismatchError(f"mode-n operand must be a matrix or vector, got order {op.ndim}")


def contracted_product(a: ArrayLike, b: ArrayLike) -> DenseTensor:
    """Contract the last mode of ``a`` with the first mode of ``b``."""
    a, b = as_array(a), as_array(b)
    if a.ndim == 0 or b.ndim == 0:
        raise ShapeMismatchError("contracted product needs operands of order >= 1")
    if a.shape[-1] != b.shape[0]:
        raise ShapeMismatchError(
            f"contracted product: bond sizes differ ({a.shape[-1]} vs {b.shape[0]})"
        )
    reserve_elements(a.size // a.shape[-1] * (b.size // b.shape[0]), "contracted product")
    return DenseTensor(np.tensordot(a, b, axes=1))


def tucker_operator(g: ArrayLike, factors: Sequence[ArrayLike]) -> DenseTensor:
    """
    Apply one factor per mode of the core ``g``.

    Factor n has its last mode equal to mode n of ``g``; its leading modes replace
    that mode in the result (a vector factor removes it).
    """
    core = as_array(g)
    mats: List[np.ndarray] = [as_array(f) for f in factors]
    if len(mats) != core.ndim:
        raise ShapeMismatchError(f"{len(mats)} factors given for a core of order {core.ndim}")
    for mode, (factor, size) in enumerate(zip(mats, core.shape), start=1):
        if factor.ndim == 0 or factor.shape[-1] != size:
            raise ShapeMismatchError(
                f"factor {mode}: last mode {factor.shape[-1:] or '()'} does not match core mode size {size}"
            )
    reserve_elements(
        math.prod(math.prod(f.shape[:-1]) for f in mats), "tucker operator result"
    )

    # Each step contracts the leading core mode and appends the factor's free modes,
    # so after N steps the free modes sit in factor order.
    result = core
    for factor in mats:
        result = np.tensordot(result, factor, axes=([0], [factor.ndim - 1]))
    return DenseTensor(result)


def self_contraction(x: ArrayLike) -> DenseTensor:
    """Sum over the diagonal of the first and last modes; order drops by two."""
    a = as_array(x)
    if a.ndim < 2:
        raise ShapeMismatchError(f"self-contraction needs order >= 2, got {a.ndim}")
    if a.shape[0] != a.shape[-1]:
        raise ShapeMismatchError(
            f"self-contraction: first and last mode sizes differ ({a.shape[0]} vs {a.shape[-1]})"
        )
    return DenseTensor(np.asarray(np.trace(a, axis1=0, axis2=a.ndim - 1)))
