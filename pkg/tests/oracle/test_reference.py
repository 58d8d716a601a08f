import numpy as np
import pytest

from services.oracle.reference import OracleOp, dense_reference, unfolding_tail
from services.oracle.report import seeded_rng
from shared.errors import ShapeMismatchError, WorkCapExceededError
from tests.conftest import rel_err


def test_kronecker_matches_numpy(rng):
    a, b = rng.standard_normal((2, 3)), rng.standard_normal((3, 2))
    assert rel_err(np.kron(a, b), dense_reference(OracleOp.KRON, a, b)) <= 1e-15


def test_direct_sum_places_blocks_on_the_diagonal():
    a, b = np.ones((1, 2)), 2 * np.ones((2, 1))
    expected = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 2.0], [0.0, 0.0, 2.0]])
    assert np.array_equal(dense_reference(OracleOp.DIRECT_SUM, a, b), expected)


def test_mode_product_and_self_contraction_match_einsum(rng):
    x = rng.standard_normal((2, 3, 2))
    u = rng.standard_normal((4, 3))
    assert rel_err(np.einsum("ajc,bj->abc", x, u), dense_reference(OracleOp.MODE_PRODUCT, x, u, n=2)) <= 1e-14
    y = rng.standard_normal((3, 2, 3))
    assert rel_err(np.einsum("kik->i", y), dense_reference(OracleOp.SELF_CONTRACTION, y)) <= 1e-14


def test_rank_one_chain_is_an_outer_product(rng):
    u, v, w = rng.standard_normal(2), rng.standard_normal(3), rng.standard_normal(2)
    cores = [u.reshape(1, 2, 1), v.reshape(1, 3, 1), w.reshape(1, 2, 1)]
    expected = np.einsum("i,j,k->ijk", u, v, w)
    assert rel_err(expected, dense_reference(OracleOp.TT_DENSE, cores)) <= 1e-15


def test_scalar_references(rng):
    a = rng.standard_normal((3, 3))
    x = rng.standard_normal(3)
    assert dense_reference(OracleOp.DOT, x, x) == pytest.approx(x @ x, rel=1e-14)
    assert dense_reference(OracleOp.QUADFORM, a, x) == pytest.approx(x @ a @ x, rel=1e-12)


def test_hadamard_shapes_checked():
    with pytest.raises(ShapeMismatchError):
        dense_reference(OracleOp.HADAMARD, np.ones((2, 2)), np.ones((2, 3)))


def test_work_cap_refuses_large_references():
    with pytest.raises(WorkCapExceededError):
        dense_reference(OracleOp.KRON, np.ones((3, 3)), np.ones((3, 3)), work_cap=10)
    with pytest.raises(WorkCapExceededError):
        unfolding_tail(np.ones((4, 4)), 1, 1, work_cap=10)


@pytest.mark.parametrize("seed", range(5))
def test_unfolding_tail_matches_numpy(seed):
    x = seeded_rng(seed).standard_normal((3, 4, 2))
    for n in (1, 2):
        s = np.linalg.svd(x.reshape(int(np.prod(x.shape[:n])), -1), compute_uv=False)
        for r in range(len(s) + 1):
            assert unfolding_tail(x, n, r) == pytest.approx(np.sqrt(np.sum(s[r:] ** 2)), rel=1e-12, abs=1e-13)


def test_unfolding_tail_split_range():
    with pytest.raises(ShapeMismatchError):
        unfolding_tail(np.ones((2, 2)), 2, 1)


def test_seeded_rng_is_reproducible():
    assert np.array_equal(seeded_rng(7).standard_normal(5), seeded_rng(7).standard_normal(5))
