"""Compare the compiled kernel backend against the pure-numpy fallback.

Micro benchmarks time the individual kernels on realistic shapes (8x8
blocks against the 24-atom RDCDB bank).  The macro benchmark runs a full
wavelet-domain HBW-OMP approximation twice, once per backend, in
subprocesses so each one binds its backend at import time.

Usage: python benchmarks/bench_kernels.py [--macro-size N] [--skip-macro]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from blockpursuit import _pykernels

try:
    from blockpursuit import _ckernels
except ImportError:
    _ckernels = None

BANK_COUNT = 24
BLOCK = 8

_MACRO_SNIPPET = """
import time
import numpy as np
import blockpursuit as bp
from blockpursuit.config import PipelineConfig
from blockpursuit.pursuit import StopRule, approximate_image

n = {size}
y, x = np.mgrid[0:n, 0:n].astype(float) / n
base = sum(a*np.sin(2*np.pi*(fx*x+fy*y)) for fx, fy, a in [(3,1,60),(1,4,50),(5,2,35),(7,3,18)])
base = (base - base.min()) / (base.max() - base.min()) * 235 + 10
img = bp.IntensityImage(np.clip(base + np.random.default_rng(0).normal(0, 8, (n, n)), 0, 255))
cfg = PipelineConfig(domain="wavelet", wavelet_levels=3, block_size=8,
                     methods=("hbw-omp",), stop=StopRule.psnr(45.0))
t0 = time.perf_counter()
_, res = approximate_image(img, cfg)
dt = time.perf_counter() - t0
print(f"{{bp.backend_name()}} {{dt:.3f}} {{res.total_atoms}} {{res.achieved_psnr:.2f}}")
"""


def _bench(fn, *args, repeat=2000):
    fn(*args)  # warm up
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t0) / repeat


def micro(backends):
    rng = np.random.default_rng(42)
    bank_t = np.ascontiguousarray(rng.normal(0, 1, (BANK_COUNT, BLOCK)))
    bank_t /= np.linalg.norm(bank_t, axis=1, keepdims=True)
    block = np.ascontiguousarray(rng.normal(0, 5, (BLOCK, BLOCK)))
    basis = np.ascontiguousarray(np.linalg.qr(rng.normal(0, 1, (64, 10)))[0].T)
    duals = rng.normal(0, 1, (10, 64))
    d_vec = rng.normal(0, 1, 64)
    b_vec = rng.normal(0, 1, 64)
    u_vec = rng.normal(0, 1, BLOCK)
    zeros64 = np.zeros(64)
    cases = [
        ("correlations", lambda k: k.correlations(bank_t, block)),
        ("best_correlation", lambda k: k.best_correlation(bank_t, block)),
        # c=0 / b_new=0 keep the in-place targets fixed across repetitions
        # without changing the work done per call.
        ("subtract_outer", lambda k: k.subtract_outer(block, 0.0, u_vec, u_vec)),
        ("orthogonalize", lambda k: k.orthogonalize(basis, d_vec)),
        ("update_duals", lambda k: k.update_duals(duals, d_vec, zeros64)),
    ]
    name_w = max(len(n) for n, _ in cases)
    header = f"{'kernel':<{name_w}}  " + "  ".join(f"{b.BACKEND:>10}" for b in backends)
    if len(backends) == 2:
        header += f"  {'speedup':>8}"
    print(header)
    for name, call in cases:
        times = [_bench(call, backend) for backend in backends]
        row = f"{name:<{name_w}}  " + "  ".join(f"{t * 1e6:>8.2f}us" for t in times)
        if len(times) == 2:
            row += f"  {times[0] / times[1]:>7.1f}x"
        print(row)


def macro(size):
    print(f"\nmacro: wavelet HBW-OMP to 45 dB on a {size}x{size} textured image")
    for pure in ("1", ""):
        env = dict(os.environ)
        if pure:
            env["BLOCKPURSUIT_PURE"] = pure
        else:
            env.pop("BLOCKPURSUIT_PURE", None)
        out = subprocess.run(
            [sys.executable, "-c", _MACRO_SNIPPET.format(size=size)],
            capture_output=True, text=True, env=env, check=True,
        ).stdout.strip()
        backend, seconds, atoms, psnr = out.split()
        print(f"  {backend:>8}: {float(seconds):7.3f}s  K={atoms}  psnr={psnr} dB")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--macro-size", type=int, default=128)
    parser.add_argument("--skip-macro", action="store_true")
    args = parser.parse_args()
    backends = [_pykernels] + ([_ckernels] if _ckernels is not None else [])
    if _ckernels is None:
        print("compiled backend not built; timing the pure backend only\n")
    micro(backends)
    if not args.skip_macro:
        macro(args.macro_size)


if __name__ == "__main__":
    main()
