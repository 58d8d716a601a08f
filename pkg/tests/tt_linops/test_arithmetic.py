import numpy as np
import pytest
import scipy.linalg

from services.oracle.reference import (
    OracleOp,
    dense_reference,
    fiber_contraction_matrix,
    fiber_hadamard_core,
    fiber_operator_core,
    fiber_quadratic_matrix,
    fiber_sum_core,
)
from services.oracle.report import compare, seeded_rng
from services.tt_format.cores import random_tt, tt_from_vectors, tt_scalar_mul, tt_validate
from services.tt_format.decomposition import separation_ranks, tt_round
from services.tt_format.evaluation import tt_to_dense
from services.tt_format.orthogonal import OrthMode, orthogonalize, tt_norm
from services.tt_format.truncation import TruncationSpec
from services.tt_linops.arithmetic import (
    Strategy,
    apply_core,
    core_contraction,
    quadratic_form,
    tt_add,
    tt_dot,
    tt_hadamard,
    ttm_apply,
)
from services.tt_linops.matrix_tt import TTMatrix, identity_ttm, random_ttm
from shared.errors import ShapeMismatchError
from tests.conftest import rel_err

TOL = 1e-12


def _small_instance(seed, square=False):
    """Random N=3 pair x, y and operator A with sizes and bonds <= 3."""
    rng = seeded_rng(seed)
    dims = [int(d) for d in rng.integers(1, 4, size=3)]
    rows = dims if square else [int(d) for d in rng.integers(1, 4, size=3)]
    x = random_tt(dims, [int(r) for r in rng.integers(1, 4, size=2)], rng)
    y = random_tt(dims, [int(r) for r in rng.integers(1, 4, size=2)], rng)
    a = random_ttm(rows, dims, [int(r) for r in rng.integers(1, 4, size=2)], rng)
    return x, y, a


def _dense(train):
    return dense_reference(OracleOp.TT_DENSE, train.cores)


def _abs_train(train):
    return tt_validate([np.abs(core.data) for core in train])


def _abs_operator(a):
    return TTMatrix([np.abs(core.data) for core in a])


@pytest.mark.parametrize("seed", range(10))
def test_rank_arithmetic(seed):
    x, y, a = _small_instance(seed)
    assert tt_add(x, y).ranks == tuple(p + q for p, q in zip(x.ranks, y.ranks))
    assert tt_hadamard(x, y).ranks == tuple(p * q for p, q in zip(x.ranks, y.ranks))
    assert ttm_apply(a, x).ranks == tuple(p * q for p, q in zip(a.ranks, x.ranks))


@pytest.mark.parametrize("seed", range(10))
def test_rounding_a_doubled_train_restores_its_ranks(seed):
    rng = seeded_rng(seed)
    x = random_tt((3, 3, 3, 3), (2, 3, 2), rng)
    doubled = tt_add(x, x)
    assert doubled.ranks == (4, 6, 4)
    rounded = tt_round(doubled, TruncationSpec(epsilon=1e-12))
    assert rounded.ranks == x.ranks
    assert rel_err(2.0 * tt_to_dense(x).array, tt_to_dense(rounded).array) <= 1e-10


@pytest.mark.parametrize("seed", range(20))
def test_arithmetic_matches_dense_reference(seed):
    x, y, a = _small_instance(seed)
    xd, yd = _dense(x), _dense(y)
    ad = dense_reference(OracleOp.TTM_DENSE, a.cores)
    descriptor = f"dims={x.dims} x_ranks={x.ranks} y_ranks={y.ranks}"

    reports = [
        compare("tt_add", xd + yd, tt_to_dense(tt_add(x, y)).array, seed=seed, descriptor=descriptor),
        compare("tt_hadamard", dense_reference(OracleOp.HADAMARD, xd, yd),
                tt_to_dense(tt_hadamard(x, y)).array, seed=seed, descriptor=descriptor),
        compare("tt_dot", dense_reference(OracleOp.DOT, xd, yd), tt_dot(x, y),
                seed=seed, scale=tt_dot(_abs_train(x), _abs_train(y))),
        compare("ttm_apply", dense_reference(OracleOp.MATVEC, ad, xd),
                tt_to_dense(ttm_apply(a, x)).vectorize(), seed=seed, descriptor=descriptor),
    ]
    for report in reports:
        assert report.passed, report


@pytest.mark.parametrize("seed", range(20))
@pytest.mark.parametrize("strategy", list(Strategy))
def test_quadratic_form_matches_dense_reference(seed, strategy):
    x, _, a = _small_instance(seed, square=True)
    xd = _dense(x)
    ad = dense_reference(OracleOp.TTM_DENSE, a.cores)
    # sum of absolute term products bounds the rounding of any summation order
    scale = quadratic_form(_abs_train(x), _abs_operator(a))
    report = compare("quadratic_form", dense_reference(OracleOp.QUADFORM, ad, xd),
                     quadratic_form(x, a, strategy), seed=seed, scale=scale)
    assert report.passed, report


@pytest.mark.parametrize("seed", range(10))
def test_dot_strategies_agree(seed):
    x, y, _ = _small_instance(seed)
    boundary = tt_dot(x, y, Strategy.BOUNDARY)
    explicit = tt_dot(x, y, Strategy.EXPLICIT)
    assert boundary == pytest.approx(explicit, rel=1e-12, abs=1e-14)


def test_dot_of_train_with_itself_is_squared_norm(rng):
    x = random_tt((3, 2, 3), (2, 2), rng)
    assert tt_dot(x, x) == pytest.approx(tt_to_dense(x).norm() ** 2, rel=1e-12)


def test_scalar_multiple_via_add(rng):
    x = random_tt((2, 3), (2,), rng)
    difference = tt_add(x, tt_scalar_mul(x, -1.0))
    assert np.max(np.abs(tt_to_dense(difference).array)) <= 1e-13


def test_order_one_add_keeps_unit_bonds(rng):
    x, y = tt_from_vectors([rng.standard_normal(3)]), tt_from_vectors([rng.standard_normal(3)])
    z = tt_add(x, y)
    assert z[0].shape == (1, 3, 1)
    assert rel_err(tt_to_dense(x).array + tt_to_dense(y).array, tt_to_dense(z).array) <= TOL


def test_shape_mismatches(rng):
    x = random_tt((2, 3), (2,), rng)
    y = random_tt((3, 2), (2,), rng)
    a = random_ttm((2, 2), (2, 2), (1,), rng)
    with pytest.raises(ShapeMismatchError):
        tt_add(x, y)
    with pytest.raises(ShapeMismatchError):
        tt_dot(x, y)
    with pytest.raises(ShapeMismatchError):
        ttm_apply(a, x)
    with pytest.raises(ShapeMismatchError):
        quadratic_form(x, random_ttm((3, 3), (2, 3), (1,), rng))


# Three constructions of every arithmetic core: whole-core tensor operations (the
# library), per-slice matrices and per-fiber vectors (the reference builders).

def _slices(core):
    return [core[:, i, :] for i in range(core.shape[1])]


@pytest.mark.parametrize("seed", range(10))
def test_sum_cores_three_ways(seed):
    x, y, _ = _small_instance(seed)
    z = tt_add(x, y)
    for k, position in enumerate(["first", "middle", "last"]):
        xs, ys = _slices(x[k].data), _slices(y[k].data)
        if position == "first":
            by_slices = np.stack([np.hstack([p, q]) for p, q in zip(xs, ys)], axis=1)
        elif position == "last":
            by_slices = np.stack([np.vstack([p, q]) for p, q in zip(xs, ys)], axis=1)
        else:
            by_slices = np.stack([scipy.linalg.block_diag(p, q) for p, q in zip(xs, ys)], axis=1)
        by_fibers = fiber_sum_core(x[k], y[k], position)
        assert np.array_equal(z[k].data, by_slices)
        assert np.array_equal(z[k].data, by_fibers)


@pytest.mark.parametrize("seed", range(10))
def test_hadamard_cores_three_ways(seed):
    x, y, _ = _small_instance(seed)
    z = tt_hadamard(x, y)
    for k in range(3):
        by_slices = np.stack([np.kron(p, q) for p, q in zip(_slices(x[k].data), _slices(y[k].data))], axis=1)
        assert rel_err(by_slices, z[k].data) <= TOL
        assert rel_err(fiber_hadamard_core(x[k], y[k]), z[k].data) <= TOL


@pytest.mark.parametrize("seed", range(10))
def test_core_contraction_three_ways(seed):
    x, y, _ = _small_instance(seed)
    for k in range(3):
        library = core_contraction(x[k], y[k])
        by_slices = sum(np.kron(p, q) for p, q in zip(_slices(x[k].data), _slices(y[k].data)))
        assert rel_err(by_slices, library) <= TOL
        assert rel_err(fiber_contraction_matrix(x[k], y[k]), library) <= TOL


@pytest.mark.parametrize("seed", range(10))
def test_operator_cores_three_ways(seed):
    x, _, a = _small_instance(seed)
    for k in range(3):
        ac, xc = a[k].data, x[k].data
        library = apply_core(ac, xc)
        by_slices = np.stack(
            [sum(np.kron(ac[:, i, j, :], xc[:, j, :]) for j in range(ac.shape[2])) for i in range(ac.shape[1])],
            axis=1,
        )
        assert rel_err(by_slices, library) <= TOL
        assert rel_err(fiber_operator_core(ac, xc), library) <= TOL


@pytest.mark.parametrize("seed", range(10))
def test_quadratic_core_matrices_three_ways(seed):
    x, _, a = _small_instance(seed, square=True)
    for k in range(3):
        ac, xc = a[k].data, x[k].data
        library = core_contraction(xc, apply_core(ac, xc))
        by_slices = sum(
            np.kron(xc[:, i, :], np.kron(ac[:, i, j, :], xc[:, j, :]))
            for i in range(ac.shape[1]) for j in range(ac.shape[2])
        )
        assert rel_err(by_slices, library) <= TOL
        assert rel_err(fiber_quadratic_matrix(xc, ac), library) <= TOL


@pytest.mark.parametrize("seed", range(5))
def test_bounded_rank_set_is_not_convex(seed):
    rng = seeded_rng(seed)
    x = random_tt((4, 4, 4), (2, 2), rng)
    y = random_tt((4, 4, 4), (2, 2), rng)
    for train in (x, y):
        assert separation_ranks(tt_to_dense(train)) == [2, 2]
    midpoint = tt_scalar_mul(tt_add(x, y), 0.5)
    assert tt_round(midpoint).ranks == (4, 4)
    assert separation_ranks(tt_to_dense(midpoint)) == [4, 4]


@pytest.mark.parametrize("seed", range(10))
def test_left_orthogonal_core_contracts_to_identity(seed):
    rng = seeded_rng(seed)
    x = random_tt((3, 4, 3, 2), (3, 4, 2), rng)
    left = orthogonalize(x, OrthMode.LEFT, x.order)
    for core in left.cores[:-1]:
        left_rank, _, right_rank = core.shape
        contraction = core_contraction(core, core)
        assert np.allclose(np.eye(left_rank).ravel() @ contraction, np.eye(right_rank).ravel(), atol=1e-12)
    first = left.cores[0]
    assert np.allclose(core_contraction(first, first).reshape(first.shape[2], first.shape[2]),
                       np.eye(first.shape[2]), atol=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_identity_operator_is_neutral(seed):
    x, _, _ = _small_instance(seed)
    eye = identity_ttm(x.dims)
    assert rel_err(tt_to_dense(x).array, tt_to_dense(ttm_apply(eye, x)).array) <= TOL

    norm = tt_norm(x)
    for strategy in Strategy:
        assert quadratic_form(x, eye, strategy) == pytest.approx(norm ** 2, rel=1e-10, abs=1e-12)
        assert quadratic_form(tt_scalar_mul(x, 0.0), eye, strategy) == 0.0
