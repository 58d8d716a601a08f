import numpy as np
import pytest
from numpy.testing import assert_array_equal

from services.oracle.reference import OracleOp, dense_reference
from services.oracle.report import seeded_rng
from services.tensor_core.dense import DenseTensor
from services.tensor_core.operations import outer
from services.tt_format.cores import (
    Orthogonality,
    TTCore,
    TTTensor,
    random_tt,
    tt_from_vectors,
    tt_scalar_mul,
    tt_validate,
)
from services.tt_format.evaluation import (
    Side,
    partial_product,
    tt_entry,
    tt_rank_one_contraction,
    tt_to_dense,
    tt_vectorize_strong_kron,
)
from shared.errors import BondMismatchError, IndexOutOfRangeError, ShapeMismatchError, SiteOutOfRangeError
from tests.conftest import rel_err

TOL = 1e-12


def test_validate_reports_bond():
    cores = [np.ones((1, 2, 3)), np.ones((2, 2, 1))]
    with pytest.raises(BondMismatchError) as excinfo:
        tt_validate(cores)
    assert excinfo.value.bond == 1

    with pytest.raises(BondMismatchError) as excinfo:
        tt_validate([np.ones((2, 2, 1))])
    assert excinfo.value.bond == 0

    with pytest.raises(BondMismatchError) as excinfo:
        tt_validate([np.ones((1, 2, 2)), np.ones((2, 2, 2))])
    assert excinfo.value.bond == 2


def test_validate_rejects_wrong_core_order_and_empty():
    with pytest.raises(ShapeMismatchError):
        tt_validate([np.ones((1, 2))])
    with pytest.raises(ShapeMismatchError):
        TTTensor([])


def test_validate_resets_flags():
    core = TTCore(np.eye(2).reshape(1, 2, 2), Orthogonality.LEFT)
    x = tt_validate([core, np.ones((2, 3, 1))])
    assert x.orth_flags == (Orthogonality.NONE, Orthogonality.NONE)


def test_shape_accessors(rng):
    x = random_tt((2, 3, 4), (2, 3), rng)
    assert x.order == 3
    assert x.dims == (2, 3, 4)
    assert x.ranks == (2, 3)
    assert x.bond_dims == (1, 2, 3, 1)
    assert x.storage_bytes == 8 * (1 * 2 * 2 + 2 * 3 * 3 + 3 * 4 * 1)


@pytest.mark.parametrize("seed", range(20))
def test_entries_match_chain_reference(seed):
    rng = seeded_rng(seed)
    x = random_tt((2, 3, 2, 2), (2, 3, 2), rng)
    expected = dense_reference(OracleOp.TT_DENSE, x.cores)
    dense = tt_to_dense(x)
    assert rel_err(expected, dense.array) <= TOL
    for idx in [(0, 0, 0, 0), (1, 2, 1, 0), (0, 1, 1, 1)]:
        assert tt_entry(x, idx) == pytest.approx(expected[idx], rel=TOL, abs=1e-15)


def test_entry_index_checked(rng):
    x = random_tt((2, 3), (2,), rng)
    with pytest.raises(IndexOutOfRangeError):
        tt_entry(x, (0, 3))


@pytest.mark.parametrize("seed", range(10))
def test_strong_kron_vectorization(seed):
    rng = seeded_rng(seed)
    x = random_tt((3, 2, 2), (2, 2), rng)
    assert rel_err(tt_to_dense(x).vectorize(), tt_vectorize_strong_kron(x)) <= TOL


def test_partial_product_shapes_and_ranges(rng):
    x = random_tt((2, 3, 2), (2, 3), rng)
    assert partial_product(x, Side.LEFT, 0).order == 0
    assert partial_product(x, Side.LEFT, 2).dims == (2, 3, 3)
    assert partial_product(x, Side.RIGHT, 2).dims == (2, 3, 2)
    assert partial_product(x, Side.RIGHT, 4).item() == 1.0
    full_left = partial_product(x, Side.LEFT, 3)
    assert rel_err(tt_to_dense(x).array, full_left.array.reshape(x.dims)) <= TOL
    assert rel_err(tt_to_dense(x).array, partial_product(x, Side.RIGHT, 1).array.reshape(x.dims)) <= TOL

    with pytest.raises(SiteOutOfRangeError):
        partial_product(x, Side.LEFT, 4)
    with pytest.raises(SiteOutOfRangeError):
        partial_product(x, Side.RIGHT, 0)


def test_scalar_mul_scales_first_core(rng):
    x = random_tt((2, 2, 2), (2, 2), rng)
    y = tt_scalar_mul(x, -3.0)
    assert rel_err(-3.0 * tt_to_dense(x).array, tt_to_dense(y).array) <= TOL
    assert y[1] is x[1]
    assert y[0].orth is Orthogonality.NONE


def test_from_vectors_is_outer_product(rng):
    u, v, w = rng.standard_normal(2), rng.standard_normal(3), rng.standard_normal(2)
    x = tt_from_vectors([u, v, w])
    assert x.ranks == (1, 1)
    assert rel_err(outer(outer(u, v), w).array, tt_to_dense(x).array) <= TOL


@pytest.mark.parametrize("seed", range(10))
def test_rank_one_contraction(seed):
    rng = seeded_rng(seed)
    x = random_tt((2, 3, 2), (2, 2), rng)
    vectors = [rng.standard_normal(d) for d in x.dims]
    rank_one = tt_to_dense(tt_from_vectors(vectors)).array
    expected = float(np.sum(tt_to_dense(x).array * rank_one))
    assert tt_rank_one_contraction(x, vectors) == pytest.approx(expected, rel=1e-12, abs=1e-14)


def test_core_orthogonality_predicates():
    q = np.linalg.qr(np.random.default_rng(3).standard_normal((6, 2)))[0]
    left = TTCore(q.reshape(3, 2, 2))
    assert left.is_left_orthogonal()
    assert not left.is_right_orthogonal()

    # A 1 x 1 x 1 core holding 1.0 is orthogonal along every mode
    assert TTCore(np.ones((1, 1, 1))).is_all_orthogonal()
    assert not TTCore(np.ones((1, 2, 1))).is_all_orthogonal()


def test_cores_are_immutable(rng):
    source = rng.standard_normal((1, 2, 1))
    core = TTCore(source)
    source[0, 0, 0] = 99.0
    assert core.data[0, 0, 0] != 99.0
    with pytest.raises(ValueError):
        core.data[0, 0, 0] = 1.0


def test_order_one_train(rng):
    x = tt_validate([rng.standard_normal((1, 4, 1))])
    assert x.ranks == ()
    assert_array_equal(tt_to_dense(x).array, x[0].data.reshape(4))
    assert isinstance(tt_to_dense(x), DenseTensor)
