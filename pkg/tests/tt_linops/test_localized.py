import numpy as np
import pytest

from services.oracle.reference import OracleOp, dense_reference
from services.oracle.report import seeded_rng
from services.tt_format.cores import random_tt
from services.tt_format.evaluation import tt_to_dense
from services.tt_format.frames import frame_matrix
from services.tt_format.orthogonal import OrthMode, orthogonalize
from services.tt_linops.arithmetic import Strategy, quadratic_form, ttm_apply
from services.tt_linops.localized import (
    local_form_matrix,
    local_matrix,
    localized_bilinear_form,
    localized_map_apply,
)
from services.tt_linops.matrix_tt import identity_ttm, random_ttm
from shared.errors import ShapeMismatchError, SiteOutOfRangeError
from tests.conftest import rel_err

TOL = 1e-12


def _instance(seed, square=True):
    rng = seeded_rng(seed)
    dims = [int(d) for d in rng.integers(2, 4, size=3)]
    rows = dims if square else [int(d) for d in rng.integers(1, 4, size=3)]
    x = random_tt(dims, [int(r) for r in rng.integers(1, 4, size=2)], rng)
    a = random_ttm(rows, dims, [int(r) for r in rng.integers(1, 3, size=2)], rng)
    return rng, x, a


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("n", [1, 2, 3])
def test_localized_map_matches_frame_product(seed, n):
    rng, x, a = _instance(seed, square=False)
    w = rng.uniform(-1, 1, size=x[n - 1].shape)
    dense_a = dense_reference(OracleOp.TTM_DENSE, a.cores)
    expected = dense_a @ (frame_matrix(x, n) @ w.reshape(-1))

    actual = localized_map_apply(a, x, n, w)
    assert actual.dims == a.row_dims
    assert rel_err(expected, actual.vectorize()) <= TOL
    assert rel_err(expected, local_matrix(a, x, n) @ w.reshape(-1)) <= TOL


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("n", [1, 2, 3])
def test_localized_bilinear_form_matches_frame_product(seed, n):
    rng, x, a = _instance(seed)
    y = rng.uniform(-1, 1, size=x[n - 1].shape)
    w = rng.uniform(-1, 1, size=x[n - 1].shape)
    frame = frame_matrix(x, n)
    dense_a = dense_reference(OracleOp.TTM_DENSE, a.cores)
    expected = y.reshape(-1) @ frame.T @ dense_a @ frame @ w.reshape(-1)
    scale = np.linalg.norm(frame @ y.reshape(-1)) * np.linalg.norm(dense_a) * np.linalg.norm(frame @ w.reshape(-1))

    for strategy in Strategy:
        actual = localized_bilinear_form(a, x, n, y, w, strategy)
        assert abs(actual - expected) <= TOL * scale
    from_matrix = y.reshape(-1) @ local_form_matrix(a, x, n) @ w.reshape(-1)
    assert abs(from_matrix - expected) <= TOL * scale


@pytest.mark.parametrize("seed", range(5))
def test_substituting_the_own_core_recovers_global_results(seed):
    _, x, a = _instance(seed)
    for n in (1, 2, 3):
        core = x[n - 1].data
        assert rel_err(tt_to_dense(ttm_apply(a, x)).array, localized_map_apply(a, x, n, core).array) <= TOL
        assert localized_bilinear_form(a, x, n, core, core) == pytest.approx(
            quadratic_form(x, a), rel=1e-10, abs=1e-12
        )


def test_free_core_shape_and_site_checked(rng):
    x = random_tt((2, 3, 2), (2, 2), rng)
    a = random_ttm((2, 3, 2), (2, 3, 2), (1, 1), rng)
    with pytest.raises(ShapeMismatchError):
        localized_map_apply(a, x, 2, np.ones((2, 3, 3)))
    with pytest.raises(SiteOutOfRangeError):
        localized_map_apply(a, x, 4, np.ones((2, 3, 2)))
    with pytest.raises(SiteOutOfRangeError):
        local_matrix(a, x, 0)
    with pytest.raises(ShapeMismatchError):
        localized_bilinear_form(random_ttm((3, 3, 2), (2, 3, 2), (1, 1), rng), x, 1,
                                np.ones((1, 2, 2)), np.ones((1, 2, 2)))


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("n", [1, 2, 3])
def test_identity_form_on_mixed_canonical_train_is_core_inner_product(seed, n):
    rng, x, _ = _instance(seed)
    xc = orthogonalize(x, OrthMode.MIXED, n)
    y = rng.uniform(-1, 1, size=xc[n - 1].shape)
    w = rng.uniform(-1, 1, size=xc[n - 1].shape)
    expected = float(np.dot(y.ravel(), w.ravel()))

    for strategy in Strategy:
        actual = localized_bilinear_form(identity_ttm(xc.dims), xc, n, y, w, strategy)
        assert actual == pytest.approx(expected, rel=1e-10, abs=1e-12)
