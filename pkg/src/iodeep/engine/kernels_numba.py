"""JIT path for the hot kernels. Import fails cleanly when numba is absent.

Numerically equivalent to the numpy reference path within float32
rounding; summation order may differ, bitwise identity is only promised
within one backend.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _conv2d(x, w, sh, sw, out):
    o_ch, c_ch, kh, kw = w.shape
    _, oh, ow = out.shape
    for o in range(o_ch):
        for i in range(oh):
            for j in range(ow):
                acc = np.float32(0.0)
                for c in range(c_ch):
                    for u in range(kh):
                        for v in range(kw):
                            acc += x[c, i * sh + u, j * sw + v] * w[o, c, u, v]
                out[o, i, j] = acc
    return out


def conv2d(x: np.ndarray, w: np.ndarray, stride: tuple[int, int]) -> np.ndarray:
    sh, sw = stride
    kh, kw = w.shape[2], w.shape[3]
    oh = (x.shape[1] - kh) // sh + 1
    ow = (x.shape[2] - kw) // sw + 1
    out = np.empty((w.shape[0], oh, ow), dtype=np.float32)
    return _conv2d(np.ascontiguousarray(x), np.ascontiguousarray(w), sh, sw, out)


@njit(cache=True)
def _transposed_conv2d(x, w, sh, sw, out):
    c_ch, h, wdt = x.shape
    o_ch, _, kh, kw = w.shape
    for o in range(o_ch):
        for c in range(c_ch):
            for i in range(h):
                for j in range(wdt):
                    val = x[c, i, j]
                    for u in range(kh):
                        for v in range(kw):
                            out[o, i * sh + u, j * sw + v] += val * w[o, c, u, v]
    return out


def transposed_conv2d(x: np.ndarray, w: np.ndarray, stride: tuple[int, int]) -> np.ndarray:
    sh, sw = stride
    c, h, wdt = x.shape
    o, _, kh, kw = w.shape
    out = np.zeros((o, (h - 1) * sh + kh, (wdt - 1) * sw + kw), dtype=np.float32)
    return _transposed_conv2d(np.ascontiguousarray(x), np.ascontiguousarray(w), sh, sw, out)


@njit(cache=True)
def _max_pool2d(x, kh, kw, sh, sw, out):
    c_ch, oh, ow = out.shape
    for c in range(c_ch):
        for i in range(oh):
            for j in range(ow):
                best = x[c, i * sh, j * sw]
                for u in range(kh):
                    for v in range(kw):
                        val = x[c, i * sh + u, j * sw + v]
                        if val > best:
                            best = val
                out[c, i, j] = best
    return out


def max_pool2d(x: np.ndarray, kernel: tuple[int, int], stride: tuple[int, int]) -> np.ndarray:
    kh, kw = kernel
    sh, sw = stride
    oh = (x.shape[1] - kh) // sh + 1
    ow = (x.shape[2] - kw) // sw + 1
    out = np.empty((x.shape[0], oh, ow), dtype=np.float32)
    return _max_pool2d(np.ascontiguousarray(x), kh, kw, sh, sw, out)


@njit(cache=True)
def _bilinear_resize(x, out):
    c_ch, h, w = x.shape
    _, oh, ow = out.shape
    for i in range(oh):
        ys = (i + np.float32(0.5)) * (h / oh) - np.float32(0.5)
        if ys < 0.0:
            ys = 0.0
        if ys > h - 1.0:
            ys = h - 1.0
        y0 = int(np.floor(ys))
        y1 = min(y0 + 1, h - 1)
        fy = np.float32(ys - y0)
        for j in range(ow):
            xs = (j + np.float32(0.5)) * (w / ow) - np.float32(0.5)
            if xs < 0.0:
                xs = 0.0
            if xs > w - 1.0:
                xs = w - 1.0
            x0 = int(np.floor(xs))
            x1 = min(x0 + 1, w - 1)
            fx = np.float32(xs - x0)
            for c in range(c_ch):
                top = x[c, y0, x0] * (1 - fx) + x[c, y0, x1] * fx
                bot = x[c, y1, x0] * (1 - fx) + x[c, y1, x1] * fx
                out[c, i, j] = top * (1 - fy) + bot * fy
    return out


def bilinear_resize(x: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    out = np.empty((x.shape[0], out_h, out_w), dtype=np.float32)
    return _bilinear_resize(np.ascontiguousarray(x), out)


@njit(cache=True)
def _label_components(fg, labels, stack):
    h, w = fg.shape
    count = 0
    for si in range(h):
        for sj in range(w):
            if fg[si, sj] and labels[si, sj] == 0:
                count += 1
                top = 0
                stack[top, 0] = si
                stack[top, 1] = sj
                top += 1
                labels[si, sj] = count
                while top > 0:
                    top -= 1
                    i = stack[top, 0]
                    j = stack[top, 1]
                    if i > 0 and fg[i - 1, j] and labels[i - 1, j] == 0:
                        labels[i - 1, j] = count
                        stack[top, 0] = i - 1
                        stack[top, 1] = j
                        top += 1
                    if i + 1 < h and fg[i + 1, j] and labels[i + 1, j] == 0:
                        labels[i + 1, j] = count
                        stack[top, 0] = i + 1
                        stack[top, 1] = j
                        top += 1
                    if j > 0 and fg[i, j - 1] and labels[i, j - 1] == 0:
                        labels[i, j - 1] = count
                        stack[top, 0] = i
                        stack[top, 1] = j - 1
                        top += 1
                    if j + 1 < w and fg[i, j + 1] and labels[i, j + 1] == 0:
                        labels[i, j + 1] = count
                        stack[top, 0] = i
                        stack[top, 1] = j + 1
                        top += 1
    return count


def label_components(fg: np.ndarray) -> tuple[np.ndarray, int]:
    fg = np.ascontiguousarray(fg.astype(np.bool_))
    labels = np.zeros(fg.shape, dtype=np.int64)
    stack = np.empty((fg.size, 2), dtype=np.int64)
    count = _label_components(fg, labels, stack)
    return labels, count
