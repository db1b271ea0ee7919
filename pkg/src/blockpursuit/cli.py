"""Command-line experiment driver.

Runs one or more approximation methods over one or more images and writes
a CSV or JSON report with one row per (image, method).  Reports are
deterministic for a fixed config and seed; wall-clock timing is therefore
only included when --timing is passed, otherwise the runtime_s column is
written as 0.000.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .config import METHODS, PipelineConfig
from .errors import BlockPursuitError
from .image_io import load_image
from .metrics import dct_threshold_baseline, wt_threshold_baseline
from .pursuit import StopRule, approximate_image, approximate_segmented

CSV_COLUMNS = (
    "image",
    "method",
    "domain",
    "block_size",
    "levels",
    "stop_rule",
    "K",
    "SR",
    "psnr_db",
    "runtime_s",
    "seed",
)


@dataclass
class ReportRow:
    """One (image, method) outcome, shaped like the summary tables."""

    image: str
    method: str
    domain: str
    block_size: int | None
    levels: int | None
    stop_rule: str
    k: int
    sr: float
    psnr_db: float
    runtime_s: float
    seed: int | None
    segments: int | None = None


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="blockpursuit",
        description="Sparse block approximation of grayscale images "
        "(MP/OMP, hierarchized block-wise variants, WT/DCT thresholding baselines).",
    )
    parser.add_argument("--input", action="append", required=True,
                        metavar="PATH", help="input image (P5 PGM or 8-bit gray PNG); repeatable")
    parser.add_argument("--domain", choices=("intensity", "wavelet"), default="intensity")
    parser.add_argument("--method", default="hbw-omp",
                        help="comma-separated subset of %s, or 'all'" % (",".join(METHODS)))
    parser.add_argument("--block-size", type=int, default=8)
    parser.add_argument("--levels", type=int, default=4,
                        help="wavelet decomposition depth")
    stop = parser.add_mutually_exclusive_group()
    stop.add_argument("--target-psnr", type=float, default=None, metavar="DB")
    stop.add_argument("--budget", type=int, default=None, metavar="K",
                      help="total atom budget (HBW methods only)")
    parser.add_argument("--segments", type=int, default=None,
                        help="segment count for randomized segmented HBW runs")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", default="-", metavar="PATH",
                        help="report destination, '-' for stdout")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--timing", action="store_true",
                        help="include measured wall-clock runtimes in the report")
    return parser


def parse_args(argv) -> PipelineConfig:
    """Parse CLI flags into a validated PipelineConfig.

    Raises SystemExit(1) on any usage problem.
    """
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
        methods = _parse_methods(ns.method)
        if ns.budget is not None:
            bad = [m for m in methods if not m.startswith("hbw-")]
            if bad:
                raise _UsageError(f"--budget applies to HBW methods only, not {','.join(bad)}")
            stop_rule = StopRule.budget(ns.budget)
        else:
            stop_rule = StopRule.psnr(ns.target_psnr if ns.target_psnr is not None else 45.0)
        if ns.segments is not None:
            if ns.domain != "wavelet":
                raise _UsageError("--segments requires --domain wavelet")
            bad = [m for m in methods if not m.startswith("hbw-")]
            if bad:
                raise _UsageError(f"--segments applies to HBW methods only, not {','.join(bad)}")
        config = PipelineConfig(
            inputs=tuple(ns.input),
            domain=ns.domain,
            wavelet_levels=ns.levels,
            block_size=ns.block_size,
            methods=methods,
            stop=stop_rule,
            segments=ns.segments,
            seed=ns.seed,
            out=ns.out,
            fmt=ns.format,
            timing=ns.timing,
        )
        config.validate()
    except (_UsageError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        raise SystemExit(1) from exc
    return config


def _parse_methods(raw: str) -> tuple:
    if raw.strip().lower() == "all":
        return METHODS
    methods = []
    for token in raw.split(","):
        m = token.strip().lower()
        # long-form aliases for the baselines
        m = {"wt-baseline": "wt", "dct-baseline": "dct"}.get(m, m)
        if m not in METHODS:
            raise _UsageError(f"unknown method {token!r}; choose from {','.join(METHODS)}")
        methods.append(m)
    if not methods:
        raise _UsageError("no method given")
    return tuple(methods)


def _run_one(image_id: str, img, method: str, config: PipelineConfig) -> ReportRow:
    t0 = time.perf_counter()
    if method == "wt":
        report = wt_threshold_baseline(img, config.wavelet_levels, config.stop.psnr_db)
        return ReportRow(image_id, "wt", "wavelet", None, config.wavelet_levels,
                         config.stop.describe(), report.nonzero_count,
                         report.sparsity_ratio, report.psnr_db,
                         report.runtime_seconds, None)
    if method == "dct":
        report = dct_threshold_baseline(img, config.block_size, config.stop.psnr_db)
        return ReportRow(image_id, "dct", "intensity", config.block_size, None,
                         config.stop.describe(), report.nonzero_count,
                         report.sparsity_ratio, report.psnr_db,
                         report.runtime_seconds, None)
    one = dataclasses.replace(config, methods=(method,))
    if config.segments is not None:
        seed = config.seed if config.seed is not None else 0
        _, result = approximate_segmented(img, one, config.segments, seed)
    else:
        _, result = approximate_image(img, one)
    runtime = time.perf_counter() - t0
    levels = config.wavelet_levels if config.domain == "wavelet" else None
    return ReportRow(image_id, method, config.domain, config.block_size, levels,
                     result.stop_rule, result.total_atoms, result.sparsity_ratio,
                     result.achieved_psnr, runtime, result.seed, result.n_segments)


def run_experiment(config: PipelineConfig) -> list:
    """Execute the configured sweep and write the report.

    On a per-run failure the rows completed so far are flushed before the
    error propagates with the offending image and method named.
    """
    config.validate()
    rows: list[ReportRow] = []
    context = "input"
    try:
        for path in config.inputs:
            image_id = Path(path).stem
            context = f"image {path!r}"
            img = load_image(path)
            for method in config.methods:
                context = f"image {path!r}, method {method}"
                rows.append(_run_one(image_id, img, method, config))
    except Exception as exc:
        _write_report(rows, config)
        raise BlockPursuitError(f"{context}: {exc}") from exc
    rows.sort(key=lambda r: (r.image, METHODS.index(r.method), r.domain))
    _write_report(rows, config)
    return rows


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def _render_csv(rows: list, config: PipelineConfig) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        runtime = r.runtime_s if config.timing else 0.0
        writer.writerow([
            r.image, r.method, r.domain,
            _format_cell(r.block_size), _format_cell(r.levels), r.stop_rule,
            r.k, _format_cell(r.sr), _format_cell(r.psnr_db),
            f"{runtime:.3f}", _format_cell(r.seed),
        ])
    return buf.getvalue()


def _render_json(rows: list, config: PipelineConfig) -> str:
    payload = []
    for r in rows:
        entry = dataclasses.asdict(r)
        entry["runtime_s"] = r.runtime_s if config.timing else 0.0
        payload.append(entry)
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _write_report(rows: list, config: PipelineConfig) -> None:
    text = _render_csv(rows, config) if config.fmt == "csv" else _render_json(rows, config)
    if config.out == "-":
        sys.stdout.write(text)
    else:
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv=None) -> int:
    config = parse_args(sys.argv[1:] if argv is None else argv)
    try:
        run_experiment(config)
    except (BlockPursuitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0
