"""Pure-numpy reference path for the hot kernels.

Selected with IODEEP_KERNELS=numpy, and the automatic fallback when the
JIT path is unavailable. Shapes follow the channels-first convention.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def conv2d(x: np.ndarray, w: np.ndarray, stride: tuple[int, int]) -> np.ndarray:
    """Valid cross-correlation of a padded (C,H,W) input with (O,C,kh,kw)."""
    sh, sw = stride
    kh, kw = w.shape[2], w.shape[3]
    win = sliding_window_view(x, (kh, kw), axis=(1, 2))[:, ::sh, ::sw]
    return np.einsum("cijuv,ocuv->oij", win, w, dtype=np.float32, casting="same_kind")


def transposed_conv2d(x: np.ndarray, w: np.ndarray, stride: tuple[int, int]) -> np.ndarray:
    """Scatter form: (C,H,W) x with (O,C,kh,kw) weights, no cropping."""
    sh, sw = stride
    c, h, wdt = x.shape
    o, _, kh, kw = w.shape
    out = np.zeros((o, (h - 1) * sh + kh, (wdt - 1) * sw + kw), dtype=np.float32)
    for u in range(kh):
        for v in range(kw):
            contrib = np.tensordot(w[:, :, u, v], x, axes=([1], [0]))
            out[:, u:u + (h - 1) * sh + 1:sh, v:v + (wdt - 1) * sw + 1:sw] += contrib
    return out


def max_pool2d(x: np.ndarray, kernel: tuple[int, int], stride: tuple[int, int]) -> np.ndarray:
    kh, kw = kernel
    sh, sw = stride
    win = sliding_window_view(x, (kh, kw), axis=(1, 2))[:, ::sh, ::sw]
    return win.max(axis=(3, 4))


def bilinear_resize(x: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Pixel-center aligned bilinear resampling of a (C,H,W) tensor."""
    c, h, w = x.shape
    ys = (np.arange(out_h, dtype=np.float32) + 0.5) * (h / out_h) - 0.5
    xs = (np.arange(out_w, dtype=np.float32) + 0.5) * (w / out_w) - 0.5
    ys = np.clip(ys, 0.0, h - 1.0)
    xs = np.clip(xs, 0.0, w - 1.0)
    y0 = np.floor(ys).astype(np.int64)
    x0 = np.floor(xs).astype(np.int64)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    fy = (ys - y0).astype(np.float32)
    fx = (xs - x0).astype(np.float32)
    top = x[:, y0][:, :, x0] * (1 - fx) + x[:, y0][:, :, x1] * fx
    bot = x[:, y1][:, :, x0] * (1 - fx) + x[:, y1][:, :, x1] * fx
    return (top * (1 - fy)[None, :, None] + bot * fy[None, :, None]).astype(np.float32)


def label_components(fg: np.ndarray) -> tuple[np.ndarray, int]:
    """4-connected component labels by iterated min-neighbor relaxation.

    Returns (labels, count) with labels 1..count on foreground, 0 elsewhere.
    """
    h, w = fg.shape
    labels = np.where(fg, np.arange(1, h * w + 1, dtype=np.int64).reshape(h, w), 0)
    sentinel = np.int64(h * w + 2)
    while True:
        cur = np.where(fg, labels, sentinel)
        best = cur.copy()
        best[1:, :] = np.minimum(best[1:, :], cur[:-1, :])
        best[:-1, :] = np.minimum(best[:-1, :], cur[1:, :])
        best[:, 1:] = np.minimum(best[:, 1:], cur[:, :-1])
        best[:, :-1] = np.minimum(best[:, :-1], cur[:, 1:])
        nxt = np.where(fg, best, 0)
        if np.array_equal(nxt, labels):
            break
        labels = nxt
    # compact label values to 1..n
    uniq = np.unique(labels[labels > 0])
    remap = {v: i + 1 for i, v in enumerate(uniq)}
    if remap:
        out = np.zeros_like(labels)
        for v, i in remap.items():
            out[labels == v] = i
        labels = out
    return labels, len(uniq)
