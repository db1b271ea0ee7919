"""Backend parity: the compiled kernels must agree with the numpy reference."""

import numpy as np
import pytest

from blockpursuit import _pykernels

ckernels = pytest.importorskip("blockpursuit._ckernels")


def random_case(rng, n=8, count=24):
    bank_t = rng.normal(0, 1, (count, n))
    bank_t /= np.linalg.norm(bank_t, axis=1, keepdims=True)
    block = np.ascontiguousarray(rng.normal(0, 5, (n, n)))
    return np.ascontiguousarray(bank_t), block


def test_correlations_agree(rng):
    for _ in range(20):
        bank_t, block = random_case(rng)
        a = _pykernels.correlations(bank_t, block)
        b = ckernels.correlations(bank_t, block)
        assert np.max(np.abs(a - b)) < 1e-10


def test_best_correlation_agrees(rng):
    for _ in range(50):
        bank_t, block = random_case(rng)
        assert _pykernels.best_correlation(bank_t, block) == pytest.approx(
            ckernels.best_correlation(bank_t, block)
        )


def test_best_correlation_tie_breaks_row_major():
    bank_t = np.ascontiguousarray(np.eye(4))
    block = np.zeros((4, 4))
    block[0, 0] = -2.0
    block[1, 1] = 2.0  # same magnitude, larger (p, q)
    for impl in (_pykernels, ckernels):
        p, q, val = impl.best_correlation(bank_t, block)
        assert (p, q) == (0, 0)
        assert val == -2.0


def test_batch_matches_scalar(rng):
    bank_t, _ = random_case(rng)
    blocks = np.ascontiguousarray(rng.normal(0, 3, (12, 8, 8)))
    for impl in (_pykernels, ckernels):
        ps, qs, vals = impl.batch_best_correlation(bank_t, blocks)
        for i in range(12):
            p, q, v = impl.best_correlation(bank_t, blocks[i])
            assert (ps[i], qs[i]) == (p, q)
            assert vals[i] == pytest.approx(v, abs=1e-12)


def test_subtract_outer_agree(rng):
    u = rng.normal(0, 1, 8)
    v = rng.normal(0, 1, 8)
    block = rng.normal(0, 1, (8, 8))
    a = block.copy()
    b = block.copy()
    _pykernels.subtract_outer(a, 1.7, u, v)
    ckernels.subtract_outer(b, 1.7, u, v)
    assert np.max(np.abs(a - b)) < 1e-12
    assert np.max(np.abs(a - (block - 1.7 * np.outer(u, v)))) < 1e-12


def test_orthogonalize_agree(rng):
    basis, _ = np.linalg.qr(rng.normal(0, 1, (16, 5)))
    basis = np.ascontiguousarray(basis.T)
    d = rng.normal(0, 1, 16)
    u1, n1 = _pykernels.orthogonalize(basis, d)
    u2, n2 = ckernels.orthogonalize(basis, d)
    assert np.max(np.abs(u1 - u2)) < 1e-10
    assert n1 == pytest.approx(n2, abs=1e-10)
    assert np.max(np.abs(basis @ u1)) < 1e-12  # re-orthogonalized


def test_orthogonalize_empty_basis(rng):
    d = rng.normal(0, 1, 9)
    for impl in (_pykernels, ckernels):
        u, norm = impl.orthogonalize(np.empty((0, 9)), d)
        np.testing.assert_allclose(u, d, atol=1e-15)
        assert norm == pytest.approx(np.linalg.norm(d))


def test_update_duals_agree(rng):
    duals = rng.normal(0, 1, (6, 16))
    d_new = rng.normal(0, 1, 16)
    b_new = rng.normal(0, 1, 16)
    a = duals.copy()
    b = duals.copy()
    _pykernels.update_duals(a, d_new, b_new)
    ckernels.update_duals(b, d_new, b_new)
    assert np.max(np.abs(a - b)) < 1e-12
    assert np.max(np.abs(a - (duals - np.outer(duals @ d_new, b_new)))) < 1e-12
