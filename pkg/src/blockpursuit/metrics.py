"""Quality and sparsity metrics, plus the transform-thresholding baselines.

PSNR uses a fixed peak of 255 (the standard convention for 8-bit imagery)
and is capped at 99.0 dB, the value reported for numerically exact
reconstructions.  The Sparsity Ratio is total pixels over total retained
coefficients; higher is sparser.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NoAtomsSelectedError, TargetUnreachableError
from .image_io import IntensityImage
from .partition import BlockPartition, assemble_blocks, partition_blocks
from .wavelet import TransformedImage, cdf97_forward, cdf97_inverse

PSNR_PEAK = 255.0
PSNR_CAP_DB = 99.0


@dataclass
class MetricsReport:
    """One method's quality/sparsity summary for one image."""

    psnr_db: float
    sparsity_ratio: float
    nonzero_count: int
    method: str
    domain: str
    runtime_seconds: float


def psnr_arrays(reference: np.ndarray, approx: np.ndarray, peak: float = PSNR_PEAK) -> float:
    """10*log10(peak^2 * N / ||reference - approx||_F^2), capped at 99 dB."""
    reference = np.asarray(reference, dtype=np.float64)
    approx = np.asarray(approx, dtype=np.float64)
    if reference.shape != approx.shape:
        raise DimensionError(
            f"shape mismatch {reference.shape} vs {approx.shape}"
        )
    err2 = float(np.sum((reference - approx) ** 2))
    if err2 <= 0.0:
        return PSNR_CAP_DB
    value = 10.0 * math.log10(peak * peak * reference.size / err2)
    return min(value, PSNR_CAP_DB)


def psnr(reference: IntensityImage, approx: IntensityImage) -> float:
    """PSNR in dB between two images of identical dimensions."""
    return psnr_arrays(reference.pixels, approx.pixels)


def sparsity_ratio(n_pixels: int, k: int) -> float:
    """Total pixel count over nonzero coefficient count."""
    if k < 1:
        raise NoAtomsSelectedError("sparsity ratio undefined for k = 0")
    return n_pixels / k


def _smallest_k_meeting(total: int, psnr_at, target_psnr: float) -> tuple[int, float]:
    """Smallest k in [1, total] with psnr_at(k) >= target, by bisection.

    psnr_at must be non-decreasing in k (keep-the-k-largest thresholding).
    """
    top = psnr_at(total)
    if top < target_psnr:
        raise TargetUnreachableError(
            f"target {target_psnr} dB unreachable (full reconstruction gives {top:.3f} dB)"
        )
    lo, hi = 0, total  # invariant: lo fails the target (k=0 always does), hi meets it
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if psnr_at(mid) >= target_psnr:
            hi = mid
        else:
            lo = mid
    return hi, psnr_at(hi)


def wt_threshold_baseline(
    img: IntensityImage, levels: int, target_psnr: float
) -> MetricsReport:
    """Whole-image CDF 9/7 transform, keep the K largest coefficients.

    K is the smallest count whose reconstruction meets the PSNR target.
    """
    t0 = time.perf_counter()
    transformed = cdf97_forward(img, levels)
    flat = transformed.coeffs.ravel()
    order = np.argsort(-np.abs(flat), kind="stable")

    def psnr_at(k: int) -> float:
        kept = np.zeros_like(flat)
        idx = order[:k]
        kept[idx] = flat[idx]
        rec = cdf97_inverse(TransformedImage(kept.reshape(transformed.coeffs.shape), levels))
        return psnr_arrays(img.pixels, rec.pixels)

    k, achieved = _smallest_k_meeting(flat.size, psnr_at, target_psnr)
    runtime = time.perf_counter() - t0
    return MetricsReport(achieved, sparsity_ratio(img.pixels.size, k), k, "wt", "wavelet", runtime)


def dct_matrix(n: int) -> np.ndarray:
    """Orthonormal DCT-II matrix; row k is the k-th basis function."""
    j = np.arange(n, dtype=np.float64)[None, :]
    k = np.arange(n, dtype=np.float64)[:, None]
    mat = np.cos(np.pi * (2.0 * j + 1.0) * k / (2.0 * n))
    mat *= math.sqrt(2.0 / n)
    mat[0] /= math.sqrt(2.0)
    return mat


def dct_threshold_baseline(
    img: IntensityImage, block_size: int, target_psnr: float
) -> MetricsReport:
    """Per-block orthonormal DCT-II, global keep-the-K-largest thresholding."""
    t0 = time.perf_counter()
    part = partition_blocks(img.pixels, block_size)
    cmat = dct_matrix(block_size)
    stacked = np.stack(part.blocks)
    coeffs = np.matmul(np.matmul(cmat, stacked), cmat.T)
    flat = coeffs.ravel()
    order = np.argsort(-np.abs(flat), kind="stable")

    def psnr_at(k: int) -> float:
        kept = np.zeros_like(flat)
        idx = order[:k]
        kept[idx] = flat[idx]
        rec_blocks = np.matmul(np.matmul(cmat.T, kept.reshape(coeffs.shape)), cmat)
        rec = assemble_blocks(
            BlockPartition(part.block_size, part.grid_rows, part.grid_cols,
                           list(rec_blocks), part.origins)
        )
        return psnr_arrays(img.pixels, rec)

    k, achieved = _smallest_k_meeting(flat.size, psnr_at, target_psnr)
    runtime = time.perf_counter() - t0
    return MetricsReport(achieved, sparsity_ratio(img.pixels.size, k), k, "dct", "intensity", runtime)
