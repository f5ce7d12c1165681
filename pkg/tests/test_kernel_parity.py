"""Direct parity between the JIT and numpy kernel paths."""

import numpy as np
import pytest

from iodeep.engine import kernels
from iodeep.engine.kernels import available_backends

import oracles

pytestmark = pytest.mark.skipif(
    len(available_backends()) < 2, reason="only one backend available")


def _both(fn_name, *args):
    previous = kernels.active_backend()
    try:
        out = {}
        for backend in available_backends():
            kernels.set_backend(backend)
            out[backend] = getattr(kernels, fn_name)(*args)
        return out
    finally:
        kernels.set_backend(previous)


def test_conv2d_paths_agree():
    rng = np.random.default_rng(1)
    for _ in range(25):
        c, o = rng.integers(1, 5, 2)
        h, w = rng.integers(3, 20, 2)
        k = int(rng.choice([1, 2, 3, 5]))
        s = int(rng.choice([1, 2]))
        if k > h or k > w:
            k = 1
        x = rng.normal(0, 1, (c, h, w)).astype(np.float32)
        wt = rng.normal(0, 1, (o, c, k, k)).astype(np.float32)
        results = _both("conv2d", x, wt, (s, s))
        assert oracles.rel_err(results["numba"], results["numpy"]) <= 1e-5


def test_transposed_conv2d_paths_agree():
    rng = np.random.default_rng(2)
    for _ in range(25):
        c, o = rng.integers(1, 5, 2)
        h, w = rng.integers(2, 12, 2)
        s = int(rng.choice([1, 2]))
        k = s + int(rng.choice([0, 1]))
        x = rng.normal(0, 1, (c, h, w)).astype(np.float32)
        wt = rng.normal(0, 1, (o, c, k, k)).astype(np.float32)
        results = _both("transposed_conv2d", x, wt, (s, s))
        assert oracles.rel_err(results["numba"], results["numpy"]) <= 1e-5


def test_max_pool_paths_agree_exactly():
    rng = np.random.default_rng(3)
    for _ in range(25):
        c = int(rng.integers(1, 5))
        h, w = (int(v) for v in rng.integers(2, 20, 2))
        k = int(rng.choice([1, 2]))
        s = int(rng.choice([1, 2]))
        x = rng.normal(0, 1, (c, h, w)).astype(np.float32)
        results = _both("max_pool2d", x, (k, k), (s, s))
        assert np.array_equal(results["numba"], results["numpy"])  # pure selection


def test_resize_paths_agree():
    rng = np.random.default_rng(4)
    for _ in range(25):
        c = int(rng.integers(1, 4))
        h, w = (int(v) for v in rng.integers(2, 40, 2))
        oh, ow = (int(v) for v in rng.integers(2, 40, 2))
        x = rng.random((c, h, w), np.float32)
        results = _both("bilinear_resize", x, oh, ow)
        assert oracles.rel_err(results["numba"], results["numpy"]) <= 1e-5


def test_labeling_paths_agree_exactly():
    rng = np.random.default_rng(5)
    for trial in range(30):
        h, w = (int(v) for v in rng.integers(2, 48, 2))
        density = rng.uniform(0.2, 0.8)
        fg = rng.random((h, w)) < density
        results = _both("label_components", fg)
        la, ca = results["numba"]
        lb, cb = results["numpy"]
        assert ca == cb
        # identical labels, not merely isomorphic: both number components
        # by first pixel in row-major scan order
        assert np.array_equal(la, lb)
