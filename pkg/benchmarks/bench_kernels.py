#!/usr/bin/env python3
"""Compare the JIT and pure-numpy kernel paths on realistic shapes.

Run:  python benchmarks/bench_kernels.py [--repeats N]

Covers the hot kernels (convolutions, pooling, resize, labeling) plus a
whole forward pass of the bundled toy Unet. The JIT path is warmed before
timing so compilation is not billed to the first measurement.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from iodeep.assets import toy_unet_architecture, toy_unet_weights  # noqa: E402
from iodeep.engine import create_model, kernels, parse_weights, predict  # noqa: E402
from iodeep.netdesc import parse_architecture  # noqa: E402


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def benchmark(repeats: int):
    rng = np.random.default_rng(0)
    x64 = rng.random((8, 64, 64), np.float32)
    w33 = rng.normal(0, 1, (16, 8, 3, 3)).astype(np.float32)
    w22 = rng.normal(0, 1, (8, 8, 2, 2)).astype(np.float32)
    big = rng.random((1, 512, 512), np.float32)
    blob_mask = (rng.random((256, 256)) > 0.6)

    model = create_model(parse_architecture(toy_unet_architecture()),
                         parse_weights(toy_unet_weights()))
    slice_in = rng.random((1, 64, 64), np.float32)

    cases = [
        ("conv2d 8x64x64 k3", lambda: kernels.conv2d(x64, w33, (1, 1))),
        ("tconv 8x64x64 k2s2", lambda: kernels.transposed_conv2d(x64, w22, (2, 2))),
        ("maxpool 8x64x64 k2", lambda: kernels.max_pool2d(x64, (2, 2), (2, 2))),
        ("resize 512->64", lambda: kernels.bilinear_resize(big, 64, 64)),
        ("label 256x256", lambda: kernels.label_components(blob_mask)),
        ("toy unet forward", lambda: predict(model, slice_in)),
    ]

    backends = kernels.available_backends()
    results: dict[str, dict[str, float]] = {name: {} for name, _ in cases}
    for backend in backends:
        kernels.set_backend(backend)
        for name, fn in cases:
            fn()  # warm (JIT compile, cache fill)
            results[name][backend] = _time(fn, repeats)

    width = max(len(n) for n, _ in cases)
    header = f"{'kernel'.ljust(width)}  " + "  ".join(f"{b:>12}" for b in backends)
    if set(backends) == {"numba", "numpy"}:
        header += f"  {'jit speedup':>11}"
    print(header)
    print("-" * len(header))
    for name, _ in cases:
        row = name.ljust(width) + "  "
        row += "  ".join(f"{results[name][b] * 1e3:9.3f} ms" for b in backends)
        if set(backends) == {"numba", "numpy"}:
            jit, plain = results[name]["numba"], results[name]["numpy"]
            row += f"  {plain / jit:10.2f}x" if jit else "          -"
        print(row)


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()
    benchmark(args.repeats)
