"""Pure-numpy reference implementation of the pursuit inner-loop kernels.

``blockpursuit._kernels`` selects this module whenever the compiled
``_ckernels`` extension is unavailable (or BLOCKPURSUIT_PURE=1 is set).
Both backends implement the same contract; see the docstrings here.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def correlations(bank_t: np.ndarray, block: np.ndarray) -> np.ndarray:
    """All separable inner products <col_p x col_q, block>_F.

    bank_t is the transposed atom bank, shape (count, atom_len); block is
    (atom_len, atom_len).  Entry (p, q) of the result is the Frobenius
    inner product of the 2D atom col_p (x) col_q with the block, computed
    as bank_t @ block @ bank_t.T without materializing any 2D atom.
    """
    return (bank_t @ block) @ bank_t.T


def best_correlation(bank_t: np.ndarray, block: np.ndarray):
    """(p, q, signed value) of the entry maximizing |correlations(...)|.

    Ties resolve to the lexicographically smallest (p, q).
    """
    corr = (bank_t @ block) @ bank_t.T
    flat = int(np.argmax(np.abs(corr)))
    p, q = divmod(flat, corr.shape[1])
    return p, q, float(corr[p, q])


def batch_best_correlation(bank_t: np.ndarray, blocks: np.ndarray):
    """best_correlation over a stack of blocks, shape (Q, n, n)."""
    corr = np.matmul(np.matmul(bank_t, blocks), bank_t.T)
    q_count, m, _ = corr.shape
    flat = np.argmax(np.abs(corr).reshape(q_count, -1), axis=1)
    ps, qs = np.divmod(flat, m)
    vals = corr[np.arange(q_count), ps, qs]
    return ps.astype(np.int64), qs.astype(np.int64), vals.astype(np.float64)


def subtract_outer(block: np.ndarray, c: float, u: np.ndarray, v: np.ndarray) -> None:
    """In place: block -= c * outer(u, v)."""
    block -= c * np.outer(u, v)


def orthogonalize(basis: np.ndarray, d: np.ndarray):
    """Component of d orthogonal to the rows of basis, and its norm.

    basis has orthonormal rows, shape (k, n); k may be zero.  One
    Gram-Schmidt pass plus one re-orthogonalization pass.
    """
    u = d - basis.T @ (basis @ d)
    u -= basis.T @ (basis @ u)
    return u, float(np.linalg.norm(u))


def update_duals(duals: np.ndarray, d_new: np.ndarray, b_new: np.ndarray) -> None:
    """In place biorthogonal correction: duals -= outer(duals @ d_new, b_new)."""
    duals -= np.outer(duals @ d_new, b_new)
