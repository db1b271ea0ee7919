"""Separable 2D dictionary built from 1D atom banks.

The mixed bank concatenates a redundant discrete cosine family with the
Dirac (standard) basis; every 2D atom is the tensor product of two bank
columns, so correlations against a block reduce to two small matrix
products with the bank.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DimensionError


@dataclass
class AtomBank1D:
    """Bank of unit-norm 1D atoms stored as columns of ``atoms``."""

    atoms: np.ndarray

    def __post_init__(self) -> None:
        self.atoms = np.ascontiguousarray(self.atoms, dtype=np.float64)
        if self.atoms.ndim != 2 or self.atoms.size == 0:
            raise DimensionError("atom bank must be a non-empty 2D array")

    @property
    def atom_len(self) -> int:
        return self.atoms.shape[0]

    @property
    def count(self) -> int:
        return self.atoms.shape[1]


class SeparableDictionary:
    """2D dictionary whose atoms are tensor products of one bank's columns.

    Atom (p, q) is outer(column_p, column_q); indices are 0-based and a
    selection is always reported as the ordered pair (p, q).  The linear
    index convention, where one is needed, is n = p * count + q.
    """

    def __init__(self, bank: AtomBank1D):
        self.bank = bank
        self.bank_t = np.ascontiguousarray(bank.atoms.T)

    @property
    def atom_len(self) -> int:
        return self.bank.atom_len

    @property
    def count(self) -> int:
        return self.bank.count

    @property
    def n_atoms_2d(self) -> int:
        return self.bank.count ** 2

    def atom_2d(self, p: int, q: int) -> np.ndarray:
        """Materialize one 2D atom (mostly for tests and reconstruction)."""
        return np.outer(self.bank.atoms[:, p], self.bank.atoms[:, q])


def build_rdc(n: int, m: int) -> AtomBank1D:
    """Redundant discrete cosine bank: m atoms of length n.

    Atom i (1-based) has entries cos(pi*(2j-1)*(i-1)/(2m)) for j=1..n,
    scaled to unit Euclidean norm.  The normalization is computed
    numerically per column, which is robust for any (n, m).
    """
    if n < 1 or m < n:
        raise DimensionError(f"need 1 <= n <= m, got n={n}, m={m}")
    j = np.arange(1, n + 1, dtype=np.float64)[:, None]
    i = np.arange(1, m + 1, dtype=np.float64)[None, :]
    raw = np.cos(np.pi * (2.0 * j - 1.0) * (i - 1.0) / (2.0 * m))
    raw /= np.linalg.norm(raw, axis=0, keepdims=True)
    return AtomBank1D(raw)


def build_dirac(n: int) -> AtomBank1D:
    """The n standard basis vectors."""
    if n < 1:
        raise DimensionError(f"need n >= 1, got n={n}")
    return AtomBank1D(np.eye(n))


def build_rdcdb(n: int) -> SeparableDictionary:
    """RDC (redundancy two, m=2n) concatenated with the Dirac basis: 3n atoms."""
    rdc = build_rdc(n, 2 * n)
    dirac = build_dirac(n)
    bank = AtomBank1D(np.concatenate([rdc.atoms, dirac.atoms], axis=1))
    return SeparableDictionary(bank)


def all_correlations(dictionary: SeparableDictionary, block: np.ndarray) -> np.ndarray:
    """Frobenius inner products of every 2D atom with the block.

    Entry (p, q) is <column_p (x) column_q, block>_F, evaluated separably.
    """
    block = np.ascontiguousarray(block, dtype=np.float64)
    n = dictionary.atom_len
    if block.shape != (n, n):
        raise DimensionError(f"block shape {block.shape} does not match atom length {n}")
    return _kernels.correlations(dictionary.bank_t, block)
