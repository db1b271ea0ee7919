"""Experiment pipeline configuration."""

from __future__ import annotations

from dataclasses import dataclass, field

from .dictionary import SeparableDictionary, build_rdcdb
from .pursuit import StopRule

DOMAINS = ("intensity", "wavelet")
METHODS = ("mp", "hbw-mp", "omp", "hbw-omp", "wt", "dct")


@dataclass(frozen=True)
class PipelineConfig:
    """Everything one experiment run needs.

    Defaults follow the reference protocol: 8x8 blocks, RDCDB dictionary,
    4 decomposition levels, stop at a 45 dB PSNR target.
    """

    inputs: tuple = ()
    domain: str = "intensity"
    wavelet_levels: int = 4
    block_size: int = 8
    methods: tuple = ("hbw-omp",)
    stop: StopRule = field(default_factory=lambda: StopRule.psnr(45.0))
    segments: int | None = None
    seed: int | None = None
    out: str = "-"
    fmt: str = "csv"
    timing: bool = False

    @property
    def method(self) -> str:
        """The configured method when exactly one is set."""
        return self.methods[0]

    def build_dictionary(self) -> SeparableDictionary:
        return build_rdcdb(self.block_size)

    def validate(self) -> None:
        if self.domain not in DOMAINS:
            raise ValueError(f"domain must be one of {DOMAINS}, got {self.domain!r}")
        if self.block_size < 2:
            raise ValueError(f"block_size must be >= 2, got {self.block_size}")
        if self.wavelet_levels < 0:
            raise ValueError("wavelet_levels must be non-negative")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}; choose from {METHODS}")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.fmt!r}")
        if self.segments is not None and self.segments < 1:
            raise ValueError("segments must be a positive count")
