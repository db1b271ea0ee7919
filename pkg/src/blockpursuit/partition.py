"""Uniform block partitioning, reassembly, and the randomized permutation
used for segmented processing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError


@dataclass
class BlockPartition:
    """Disjoint square blocks covering a matrix, with their source offsets.

    ``origins[i]`` is the (row, col) offset of ``blocks[i]`` in the source
    matrix.  Origins travel with blocks under permutation, so assembly is
    position-correct regardless of list order.  Segments produced by
    segment_blocks carry a subset of the blocks; assembling a segment
    fills the uncovered area with zeros.
    """

    block_size: int
    grid_rows: int
    grid_cols: int
    blocks: list
    origins: list

    @property
    def q(self) -> int:
        return len(self.blocks)

    @property
    def source_shape(self) -> tuple[int, int]:
        return self.grid_rows * self.block_size, self.grid_cols * self.block_size


@dataclass
class BlockPermutation:
    """Seeded bijection on block list positions: new[i] = old[mapping[i]]."""

    seed: int
    mapping: np.ndarray


def partition_blocks(matrix: np.ndarray, block_size: int) -> BlockPartition:
    """Split a matrix into block_size x block_size tiles, row-major."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if block_size < 1:
        raise DimensionError(f"block_size must be positive, got {block_size}")
    rows, cols = matrix.shape
    if rows % block_size or cols % block_size:
        raise DimensionError(
            f"matrix {rows}x{cols} not divisible by block size {block_size}"
        )
    grid_rows = rows // block_size
    grid_cols = cols // block_size
    blocks = []
    origins = []
    for br in range(grid_rows):
        for bc in range(grid_cols):
            r0 = br * block_size
            c0 = bc * block_size
            blocks.append(np.ascontiguousarray(matrix[r0 : r0 + block_size, c0 : c0 + block_size]))
            origins.append((r0, c0))
    return BlockPartition(block_size, grid_rows, grid_cols, blocks, origins)


def assemble_blocks(p: BlockPartition) -> np.ndarray:
    """Place every block at its origin; exact inverse of partition_blocks."""
    out = np.zeros(p.source_shape, dtype=np.float64)
    bs = p.block_size
    for block, (r0, c0) in zip(p.blocks, p.origins):
        out[r0 : r0 + bs, c0 : c0 + bs] = block
    return out


def permute_blocks(p: BlockPartition, seed: int) -> tuple[BlockPartition, BlockPermutation]:
    """Reorder blocks by a seeded uniform permutation (Fisher-Yates, as
    implemented by numpy's PCG64 Generator.permutation)."""
    rng = np.random.default_rng(seed)
    mapping = rng.permutation(p.q).astype(np.int64)
    blocks = [p.blocks[i] for i in mapping]
    origins = [p.origins[i] for i in mapping]
    permuted = BlockPartition(p.block_size, p.grid_rows, p.grid_cols, blocks, origins)
    return permuted, BlockPermutation(seed, mapping)


def unpermute_blocks(p: BlockPartition, perm: BlockPermutation) -> BlockPartition:
    """Invert permute_blocks, restoring the original list order."""
    if len(perm.mapping) != p.q:
        raise DimensionError(
            f"permutation over {len(perm.mapping)} blocks applied to {p.q} blocks"
        )
    blocks = [None] * p.q
    origins = [None] * p.q
    for i, j in enumerate(perm.mapping):
        blocks[j] = p.blocks[i]
        origins[j] = p.origins[i]
    return BlockPartition(p.block_size, p.grid_rows, p.grid_cols, blocks, origins)


def segment_blocks(p: BlockPartition, n_segments: int) -> list[BlockPartition]:
    """Split the block list into n_segments contiguous runs of equal length."""
    if n_segments < 1:
        raise DimensionError(f"n_segments must be positive, got {n_segments}")
    if p.q % n_segments:
        raise DimensionError(f"{n_segments} segments do not divide {p.q} blocks")
    run = p.q // n_segments
    segments = []
    for s in range(n_segments):
        lo = s * run
        segments.append(
            BlockPartition(
                p.block_size,
                p.grid_rows,
                p.grid_cols,
                p.blocks[lo : lo + run],
                p.origins[lo : lo + run],
            )
        )
    return segments
