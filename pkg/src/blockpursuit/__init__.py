"""Sparse approximation of block-partitioned grayscale images.

Greedy pursuits (MP, OMP and their hierarchized block-wise variants) over
a separable redundant-cosine + Dirac dictionary, in the intensity or
CDF 9/7 wavelet domain, with Sparsity Ratio / PSNR reporting and
transform-thresholding baselines.
"""

from ._kernels import backend_name
from .config import PipelineConfig
from .dictionary import (
    AtomBank1D,
    SeparableDictionary,
    all_correlations,
    build_dirac,
    build_rdc,
    build_rdcdb,
)
from .errors import (
    BlockPursuitError,
    CorruptHeaderError,
    DimensionError,
    NoAtomsSelectedError,
    SaturatedBlockError,
    TargetUnreachableError,
    UnsupportedFormatError,
)
from .image_io import IntensityImage, load_image, save_image
from .metrics import (
    MetricsReport,
    dct_threshold_baseline,
    psnr,
    psnr_arrays,
    sparsity_ratio,
    wt_threshold_baseline,
)
from .partition import (
    BlockPartition,
    BlockPermutation,
    assemble_blocks,
    partition_blocks,
    permute_blocks,
    segment_blocks,
    unpermute_blocks,
)
from .pursuit import (
    BlockState,
    HbwScheduler,
    PursuitResult,
    StopRule,
    approximate_image,
    approximate_segmented,
    init_block_state,
    mp_step,
    omp_step,
    run_hbw,
    run_independent,
)
from .wavelet import TransformedImage, cdf97_forward, cdf97_inverse

__version__ = "0.1.0"
