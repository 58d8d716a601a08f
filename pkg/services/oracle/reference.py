"""
Brute-force references evaluated entry by entry from the defining sums.

Nothing here calls the optimized operations; only Shape and flatten_index are
shared. Every evaluation first estimates its scalar multiplies and refuses to
run above the configured work cap.
"""
import itertools
import math
from enum import Enum
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from services.tensor_core.dense import DenseTensor, Shape, flatten_index
from shared.config.loader import get_oracle_config
from shared.errors import ShapeMismatchError, WorkCapExceededError
from shared.utils.logger import get_logger

logger = get_logger(__name__)

Result = Union[np.ndarray, float]


class OracleOp(str, Enum):
    KRON = "kron"
    KRON_MODE = "kron_mode"
    KRON_MODE_BAR = "kron_mode_bar"
    HADAMARD = "hadamard"
    OUTER = "outer"
    DIRECT_SUM = "direct_sum"
    DIRECT_SUM_MODE = "direct_sum_mode"
    DIRECT_SUM_MODE_BAR = "direct_sum_mode_bar"
    MODE_PRODUCT = "mode_product"
    MODE_VECTOR_PRODUCT = "mode_vector_product"
    CONTRACTED_PRODUCT = "contracted_product"
    TUCKER = "tucker"
    SELF_CONTRACTION = "self_contraction"
    STRONG_KRON = "strong_kron"
    DOT = "dot"
    MATVEC = "matvec"
    QUADFORM = "quadform"
    TT_DENSE = "tt_dense"
    TTM_DENSE = "ttm_dense"


def _arr(x) -> np.ndarray:
    if isinstance(x, DenseTensor):
        return x.array
    if hasattr(x, "data") and isinstance(getattr(x, "data"), np.ndarray):
        return x.data
    return np.asarray(x, dtype=np.float64)


def _grid(shape: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    return itertools.product(*(range(d) for d in shape))


def _merge(i: int, j: int, inner: int) -> int:
    # overline(i j) with j fastest
    return flatten_index(Shape((i + 1, inner)), (i, j))


def _charge(work: int, op: str, work_cap: Optional[int]):
    cap = get_oracle_config().work_cap if work_cap is None else work_cap
    if work > cap:
        raise WorkCapExceededError(f"{op}: {work} multiplies exceed the work cap of {cap}")


def _kron_full(a, b):
    out = np.zeros([i * j for i, j in zip(a.shape, b.shape)])
    for ia in _grid(a.shape):
        for ib in _grid(b.shape):
            target = tuple(_merge(p, q, b.shape[k]) for k, (p, q) in enumerate(zip(ia, ib)))
            out[target] = a[ia] * b[ib]
    return out


def _kron_mode(a, b, axis):
    shape = list(a.shape)
    shape[axis] = a.shape[axis] * b.shape[axis]
    out = np.zeros(shape)
    for ia in _grid(a.shape):
        for j in range(b.shape[axis]):
            ib = ia[:axis] + (j,) + ia[axis + 1:]
            target = ia[:axis] + (_merge(ia[axis], j, b.shape[axis]),) + ia[axis + 1:]
            out[target] = a[ia] * b[ib]
    return out


def _kron_mode_bar(a, b, axis):
    shape = [a.shape[axis] if k == axis else i * j for k, (i, j) in enumerate(zip(a.shape, b.shape))]
    out = np.zeros(shape)
    for ia in _grid(a.shape):
        for ib in _grid(b.shape):
            if ib[axis] != ia[axis]:
                continue
            target = tuple(
                p if k == axis else _merge(p, q, b.shape[k])
                for k, (p, q) in enumerate(zip(ia, ib))
            )
            out[target] = a[ia] * b[ib]
    return out


def _direct_sum(a, b, shifted: Sequence[bool]):
    shape = [i + j if s else i for i, j, s in zip(a.shape, b.shape, shifted)]
    out = np.zeros(shape)
    for ia in _grid(a.shape):
        out[ia] += a[ia]
    for ib in _grid(b.shape):
        target = tuple(q + a.shape[k] if shifted[k] else q for k, q in enumerate(ib))
        out[target] += b[ib]
    return out


def _tucker(g, factors):
    out_shape = [d for f in factors for d in f.shape[:-1]]
    out = np.zeros(out_shape)
    for out_idx in _grid(out_shape):
        total = 0.0
        for r in _grid(g.shape):
            term = g[r]
            pos = 0
            for f, rn in zip(factors, r):
                free = f.ndim - 1
                term *= f[tuple(out_idx[pos:pos + free]) + (rn,)]
                pos += free
            total += term
        out[out_idx] = total
    return out


def _strong_kron(a, b):
    r1, r2 = a.shape[:2]
    r3 = b.shape[1]
    sa, sb = a.shape[2:], b.shape[2:]
    out = np.zeros([r1, r3] + [p * q for p, q in zip(sa, sb)])
    for p, s in itertools.product(range(r1), range(r3)):
        for q in range(r2):
            for ia in _grid(sa):
                for ib in _grid(sb):
                    target = (p, s) + tuple(_merge(u, v, sb[k]) for k, (u, v) in enumerate(zip(ia, ib)))
                    out[target] += a[(p, q) + ia] * b[(q, s) + ib]
    return out


def _chain_cores(cores: List[np.ndarray], physical: int) -> np.ndarray:
    """Scalar-product form: sum over all bond tuples of products of core entries."""
    bonds = [cores[0].shape[0]] + [c.shape[-1] for c in cores]
    phys_shape = [c.shape[1:1 + physical] for c in cores]
    out = np.zeros([d for shape in phys_shape for d in shape])
    for idx in _grid(out.shape):
        total = 0.0
        for r in _grid(bonds[1:-1]):
            rr = (0,) + r + (0,)
            term = 1.0
            for n, core in enumerate(cores):
                term *= core[(rr[n],) + tuple(idx[physical * n:physical * (n + 1)]) + (rr[n + 1],)]
            total += term
        out[idx] = total
    return out


def dense_reference(op: OracleOp, *operands, n: Optional[int] = None,
                    work_cap: Optional[int] = None) -> Result:
    """
    Evaluate an operation from its entrywise definition.

    Args:
        op: Operation tag
        operands: Dense operands; TT_DENSE and TTM_DENSE take the list of cores,
            STRONG_KRON takes block arrays of shape (R1, R2, *block_shape)
        n: 1-based mode for the mode-n variants and mode products
        work_cap: Override for the configured multiply budget

    Returns:
        ndarray, or float for DOT and QUADFORM
    """
    op = OracleOp(op)
    name = op.value

    if op in (OracleOp.TT_DENSE, OracleOp.TTM_DENSE):
        cores = [_arr(c) for c in operands[0]]
        physical = 1 if op is OracleOp.TT_DENSE else 2
        bond_terms = math.prod(c.shape[-1] for c in cores[:-1])
        _charge(math.prod(math.prod(c.shape[1:1 + physical]) for c in cores) * bond_terms * len(cores), name, work_cap)
        interleaved = _chain_cores(cores, physical)
        if op is OracleOp.TT_DENSE:
            return interleaved
        rows = [c.shape[1] for c in cores]
        cols = [c.shape[2] for c in cores]
        out = np.zeros((math.prod(rows), math.prod(cols)))
        for idx in _grid(interleaved.shape):
            i, j = idx[0::2], idx[1::2]
            out[flatten_index(Shape(tuple(rows)), i), flatten_index(Shape(tuple(cols)), j)] = interleaved[idx]
        return out

    if op is OracleOp.TUCKER:
        g, factors = _arr(operands[0]), [_arr(f) for f in operands[1]]
        out_size = math.prod(d for f in factors for d in f.shape[:-1])
        _charge(out_size * g.size * len(factors), name, work_cap)
        return _tucker(g, factors)

    arrays = [_arr(x) for x in operands]
    a = arrays[0]
    b = arrays[1] if len(arrays) > 1 else None
    axis = None if n is None else n - 1

    if op is OracleOp.KRON:
        _charge(a.size * b.size, name, work_cap)
        return _kron_full(a, b)
    if op is OracleOp.KRON_MODE:
        _charge(a.size * b.shape[axis], name, work_cap)
        return _kron_mode(a, b, axis)
    if op is OracleOp.KRON_MODE_BAR:
        _charge(a.size * b.size, name, work_cap)
        return _kron_mode_bar(a, b, axis)
    if op is OracleOp.HADAMARD:
        if a.shape != b.shape:
            raise ShapeMismatchError(f"hadamard reference: {a.shape} vs {b.shape}")
        _charge(a.size, name, work_cap)
        out = np.zeros(a.shape)
        for idx in _grid(a.shape):
            out[idx] = a[idx] * b[idx]
        return out
    if op is OracleOp.OUTER:
        _charge(a.size * b.size, name, work_cap)
        out = np.zeros(a.shape + b.shape)
        for ia in _grid(a.shape):
            for ib in _grid(b.shape):
                out[ia + ib] = a[ia] * b[ib]
        return out
    if op is OracleOp.DIRECT_SUM:
        _charge(a.size + b.size, name, work_cap)
        return _direct_sum(a, b, [True] * a.ndim)
    if op is OracleOp.DIRECT_SUM_MODE:
        _charge(a.size + b.size, name, work_cap)
        return _direct_sum(a, b, [k == axis for k in range(a.ndim)])
    if op is OracleOp.DIRECT_SUM_MODE_BAR:
        _charge(a.size + b.size, name, work_cap)
        return _direct_sum(a, b, [k != axis for k in range(a.ndim)])
    if op is OracleOp.MODE_PRODUCT:
        rows = b.shape[0]
        _charge(a.size * rows, name, work_cap)
        shape = list(a.shape)
        shape[axis] = rows
        out = np.zeros(shape)
        for idx in _grid(shape):
            out[idx] = sum(
                b[idx[axis], i] * a[idx[:axis] + (i,) + idx[axis + 1:]] for i in range(a.shape[axis])
            )
        return out
    if op is OracleOp.MODE_VECTOR_PRODUCT:
        _charge(a.size, name, work_cap)
        shape = a.shape[:axis] + a.shape[axis + 1:]
        out = np.zeros(shape)
        for idx in _grid(shape):
            out[idx] = sum(b[i] * a[idx[:axis] + (i,) + idx[axis:]] for i in range(a.shape[axis]))
        return out
    if op is OracleOp.CONTRACTED_PRODUCT:
        bond = a.shape[-1]
        shape = a.shape[:-1] + b.shape[1:]
        _charge(math.prod(shape) * bond, name, work_cap)
        out = np.zeros(shape)
        split = a.ndim - 1
        for idx in _grid(shape):
            out[idx] = sum(a[idx[:split] + (k,)] * b[(k,) + idx[split:]] for k in range(bond))
        return out
    if op is OracleOp.SELF_CONTRACTION:
        shape = a.shape[1:-1]
        _charge(a.size, name, work_cap)
        out = np.zeros(shape)
        for idx in _grid(shape):
            out[idx] = sum(a[(k,) + idx + (k,)] for k in range(a.shape[0]))
        return out
    if op is OracleOp.STRONG_KRON:
        _charge(a.size * b.size, name, work_cap)
        return _strong_kron(a, b)
    if op is OracleOp.DOT:
        _charge(a.size, name, work_cap)
        return float(sum(a[idx] * b[idx] for idx in _grid(a.shape)))
    if op is OracleOp.MATVEC:
        rows, cols = a.shape
        _charge(rows * cols, name, work_cap)
        vec = b.reshape(-1)
        return np.array([sum(a[i, j] * vec[j] for j in range(cols)) for i in range(rows)])
    if op is OracleOp.QUADFORM:
        vec = b.reshape(-1)
        _charge(2 * a.size, name, work_cap)
        return float(sum(vec[i] * a[i, j] * vec[j] for i, j in _grid(a.shape)))

    raise ValueError(f"no reference for {name}")


def unfolding_tail(x, n: int, r: int, work_cap: Optional[int] = None) -> float:
    """sqrt(sum_{k > r} sigma_k^2) of the prefix unfolding X_([n]) by dense SVD."""
    a = _arr(x)
    if not 1 <= n <= a.ndim - 1:
        raise ShapeMismatchError(f"split {n} out of range 1..{a.ndim - 1}")
    if r < 0:
        raise ValueError(f"rank {r} must be >= 0")
    rows = math.prod(a.shape[:n])
    cols = a.size // rows
    _charge(rows * cols * min(rows, cols), "unfolding_tail", work_cap)
    s = scipy.linalg.svd(a.reshape(rows, cols), compute_uv=False)
    return float(np.sqrt(np.sum(s[r:] ** 2)))


# Fiber-wise TT-core constructions: every core is assembled from its fibers
# z_{k,k'} (vectors over the physical index) using explicit loops.

def _fiber(core: np.ndarray, left: int, right: int) -> np.ndarray:
    return core[left, :, right]


def fiber_sum_core(x_core, y_core, position: str) -> np.ndarray:
    """Core of x + y at the first, a middle or the last position."""
    x, y = _arr(x_core), _arr(y_core)
    size = x.shape[1]
    rx0, rx1 = x.shape[0], x.shape[2]
    ry0, ry1 = y.shape[0], y.shape[2]
    if position == "first":
        out = np.zeros((1, size, rx1 + ry1))
        for k in range(rx1 + ry1):
            out[0, :, k] = _fiber(x, 0, k) if k < rx1 else _fiber(y, 0, k - rx1)
        return out
    if position == "last":
        out = np.zeros((rx0 + ry0, size, 1))
        for k in range(rx0 + ry0):
            out[k, :, 0] = _fiber(x, k, 0) if k < rx0 else _fiber(y, k - rx0, 0)
        return out
    out = np.zeros((rx0 + ry0, size, rx1 + ry1))
    for k, kk in itertools.product(range(rx0 + ry0), range(rx1 + ry1)):
        if k < rx0 and kk < rx1:
            out[k, :, kk] = _fiber(x, k, kk)
        elif k >= rx0 and kk >= rx1:
            out[k, :, kk] = _fiber(y, k - rx0, kk - rx1)
    return out


def fiber_hadamard_core(x_core, y_core) -> np.ndarray:
    """Fibers x_{r,s} ⊛ y_{r',s'} at merged bonds (r r', s s')."""
    x, y = _arr(x_core), _arr(y_core)
    out = np.zeros((x.shape[0] * y.shape[0], x.shape[1], x.shape[2] * y.shape[2]))
    for r, rr, s, ss in itertools.product(range(x.shape[0]), range(y.shape[0]),
                                          range(x.shape[2]), range(y.shape[2])):
        for i in range(x.shape[1]):
            out[_merge(r, rr, y.shape[0]), i, _merge(s, ss, y.shape[2])] = x[r, i, s] * y[rr, i, ss]
    return out


def fiber_contraction_matrix(x_core, y_core) -> np.ndarray:
    """Entries <x_{r,s}, y_{r',s'}> at merged bonds (r r', s s')."""
    x, y = _arr(x_core), _arr(y_core)
    out = np.zeros((x.shape[0] * y.shape[0], x.shape[2] * y.shape[2]))
    for r, rr, s, ss in itertools.product(range(x.shape[0]), range(y.shape[0]),
                                          range(x.shape[2]), range(y.shape[2])):
        out[_merge(r, rr, y.shape[0]), _merge(s, ss, y.shape[2])] = sum(
            x[r, i, s] * y[rr, i, ss] for i in range(x.shape[1])
        )
    return out


def fiber_operator_core(a_core, x_core) -> np.ndarray:
    """Fibers A_{r,s} x_{r',s'} (matrix times fiber) at merged bonds."""
    a, x = _arr(a_core), _arr(x_core)
    out = np.zeros((a.shape[0] * x.shape[0], a.shape[1], a.shape[3] * x.shape[2]))
    for r, rr, s, ss in itertools.product(range(a.shape[0]), range(x.shape[0]),
                                          range(a.shape[3]), range(x.shape[2])):
        for i in range(a.shape[1]):
            out[_merge(r, rr, x.shape[0]), i, _merge(s, ss, x.shape[2])] = sum(
                a[r, i, j, s] * x[rr, j, ss] for j in range(a.shape[2])
            )
    return out


def fiber_quadratic_matrix(x_core, a_core) -> np.ndarray:
    """Entries x_{r'',s''}^T A_{r,s} x_{r',s'} at bonds merged as (r'', r, r')."""
    x, a = _arr(x_core), _arr(a_core)
    rx0, rx1 = x.shape[0], x.shape[2]
    ra0, ra1 = a.shape[0], a.shape[3]
    out = np.zeros((rx0 * ra0 * rx0, rx1 * ra1 * rx1))
    for p, q, r in _grid((rx0, ra0, rx0)):
        row = flatten_index(Shape((rx0, ra0, rx0)), (p, q, r))
        for s, t, u in _grid((rx1, ra1, rx1)):
            col = flatten_index(Shape((rx1, ra1, rx1)), (s, t, u))
            out[row, col] = sum(
                x[p, i, s] * a[q, i, j, t] * x[r, j, u]
                for i in range(a.shape[1]) for j in range(a.shape[2])
            )
    return out
