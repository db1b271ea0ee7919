import numpy as np
import pytest

from blockpursuit import (
    DimensionError,
    all_correlations,
    build_dirac,
    build_rdc,
    build_rdcdb,
)
from pursuit_oracles import brute_correlations

# build_rdc(4, 8), atom i=2: cos(pi*(2j-1)/16) normalized to unit norm.
RDC_4_8_ATOM2 = [0.69351992, 0.58793780, 0.39284748, 0.13794969]


def test_rdc_shape():
    bank = build_rdc(8, 16)
    assert bank.atom_len == 8
    assert bank.count == 16


def test_rdc_first_atom_is_constant():
    bank = build_rdc(8, 16)
    np.testing.assert_allclose(bank.atoms[:, 0], np.full(8, 1.0 / np.sqrt(8.0)), atol=1e-12)


def test_rdc_atom2_matches_formula():
    bank = build_rdc(4, 8)
    j = np.arange(1, 5)
    raw = np.cos(np.pi * (2 * j - 1) / 16.0)
    np.testing.assert_allclose(bank.atoms[:, 1], raw / np.linalg.norm(raw), atol=1e-12)
    np.testing.assert_allclose(bank.atoms[:, 1], RDC_4_8_ATOM2, atol=1e-6)


@pytest.mark.parametrize("n,m", [(4, 8), (8, 16), (5, 7), (1, 1)])
def test_rdc_unit_norms(n, m):
    bank = build_rdc(n, m)
    np.testing.assert_allclose(np.linalg.norm(bank.atoms, axis=0), np.ones(m), atol=1e-12)


def test_rdc_invalid_dimensions():
    with pytest.raises(DimensionError):
        build_rdc(8, 4)
    with pytest.raises(DimensionError):
        build_rdc(0, 4)


def test_dirac_is_identity():
    bank = build_dirac(8)
    np.testing.assert_array_equal(bank.atoms, np.eye(8))
    np.testing.assert_array_equal(bank.atoms.T @ bank.atoms, np.eye(8))


def test_rdcdb_counts():
    d = build_rdcdb(8)
    assert d.count == 24
    assert d.n_atoms_2d == 576
    assert build_rdcdb(1).count == 3


def test_rdcdb_spans_space():
    d = build_rdcdb(8)
    assert np.linalg.matrix_rank(d.bank.atoms) == 8


def test_2d_atoms_unit_norm():
    d = build_rdcdb(4)
    for p in range(0, d.count, 3):
        for q in range(0, d.count, 5):
            assert np.linalg.norm(d.atom_2d(p, q)) == pytest.approx(1.0, abs=1e-12)


def test_all_correlations_matches_brute_force(rng):
    d = build_rdcdb(4)
    block = rng.normal(0, 1, (4, 4))
    fast = all_correlations(d, block)
    slow = brute_correlations(d.bank.atoms, block)
    assert np.max(np.abs(fast - slow)) < 1e-12


def test_all_correlations_dirac_self():
    d = build_rdcdb(4)
    p, q = 2 * 4 + 1, 2 * 4 + 3  # Dirac atoms e_1, e_3
    block = d.atom_2d(p, q)
    corr = all_correlations(d, block)
    assert corr[p, q] == pytest.approx(1.0, abs=1e-12)
    slow = brute_correlations(d.bank.atoms, block)
    assert np.max(np.abs(corr - slow)) < 1e-12


def test_all_correlations_zero_block():
    d = build_rdcdb(4)
    np.testing.assert_array_equal(all_correlations(d, np.zeros((4, 4))), 0.0)


def test_all_correlations_shape_mismatch():
    d = build_rdcdb(4)
    with pytest.raises(DimensionError):
        all_correlations(d, np.zeros((5, 5)))
