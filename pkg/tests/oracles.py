"""Naive reference implementations used as independent test oracles.

Everything here is written from the operator definitions with plain loops
and float64 accumulation — deliberately not sharing a line of code with
the engine's kernels.
"""

import math

import numpy as np


def same_pads(d, k, s):
    out = math.ceil(d / s)
    total = max((out - 1) * s + k - d, 0)
    return total // 2, total - total // 2


def conv2d(x, w, b=None, stride=(1, 1), padding="valid"):
    sh, sw = stride
    o_ch, c_ch, kh, kw = w.shape
    if padding == "same":
        pt, pb = same_pads(x.shape[1], kh, sh)
        pl, pr = same_pads(x.shape[2], kw, sw)
        x = np.pad(x, ((0, 0), (pt, pb), (pl, pr)))
    _, h, wdt = x.shape
    oh = (h - kh) // sh + 1
    ow = (wdt - kw) // sw + 1
    out = np.zeros((o_ch, oh, ow), dtype=np.float64)
    for o in range(o_ch):
        for i in range(oh):
            for j in range(ow):
                acc = 0.0
                for c in range(c_ch):
                    for u in range(kh):
                        for v in range(kw):
                            acc += float(x[c, i * sh + u, j * sw + v]) * float(w[o, c, u, v])
                out[o, i, j] = acc + (float(b[o]) if b is not None else 0.0)
    return out


def transposed_conv2d(x, w, b=None, stride=(1, 1), padding="valid"):
    sh, sw = stride
    c_ch, h, wdt = x.shape
    o_ch, _, kh, kw = w.shape
    full = np.zeros((o_ch, (h - 1) * sh + kh, (wdt - 1) * sw + kw), dtype=np.float64)
    for o in range(o_ch):
        for c in range(c_ch):
            for i in range(h):
                for j in range(wdt):
                    for u in range(kh):
                        for v in range(kw):
                            full[o, i * sh + u, j * sw + v] += float(x[c, i, j]) * float(w[o, c, u, v])
    if padding == "same":
        top = (kh - sh) // 2
        left = (kw - sw) // 2
        full = full[:, top:top + h * sh, left:left + wdt * sw]
    if b is not None:
        full = full + np.asarray(b, dtype=np.float64)[:, None, None]
    return full


def max_pool2d(x, kernel, stride):
    kh, kw = kernel
    sh, sw = stride
    c_ch, h, w = x.shape
    oh = (h - kh) // sh + 1
    ow = (w - kw) // sw + 1
    out = np.zeros((c_ch, oh, ow), dtype=np.float64)
    for c in range(c_ch):
        for i in range(oh):
            for j in range(ow):
                best = -math.inf
                for u in range(kh):
                    for v in range(kw):
                        best = max(best, float(x[c, i * sh + u, j * sw + v]))
                out[c, i, j] = best
    return out


def upsample_nearest(x, scale):
    c_ch, h, w = x.shape
    out = np.zeros((c_ch, h * scale, w * scale), dtype=np.float64)
    for c in range(c_ch):
        for i in range(h * scale):
            for j in range(w * scale):
                out[c, i, j] = float(x[c, i // scale, j // scale])
    return out


def dense(x, w, b=None):
    flat = np.asarray(x, dtype=np.float64).reshape(-1)
    units, feats = w.shape
    out = np.zeros(units, dtype=np.float64)
    for u in range(units):
        acc = 0.0
        for f in range(feats):
            acc += float(w[u, f]) * float(flat[f])
        out[u] = acc + (float(b[u]) if b is not None else 0.0)
    return out


def bilinear_resize(x, out_h, out_w):
    c_ch, h, w = x.shape
    out = np.zeros((c_ch, out_h, out_w), dtype=np.float64)
    for i in range(out_h):
        ys = min(max((i + 0.5) * h / out_h - 0.5, 0.0), h - 1.0)
        y0 = int(math.floor(ys))
        y1 = min(y0 + 1, h - 1)
        fy = ys - y0
        for j in range(out_w):
            xs = min(max((j + 0.5) * w / out_w - 0.5, 0.0), w - 1.0)
            x0 = int(math.floor(xs))
            x1 = min(x0 + 1, w - 1)
            fx = xs - x0
            for c in range(c_ch):
                top = float(x[c, y0, x0]) * (1 - fx) + float(x[c, y0, x1]) * fx
                bot = float(x[c, y1, x0]) * (1 - fx) + float(x[c, y1, x1]) * fx
                out[c, i, j] = top * (1 - fy) + bot * fy
    return out


def polygon_raster(points, shape):
    """Even-odd point-in-polygon per pixel center, evaluated point-wise.

    Independent of the package's scanline rasterizer: each center casts
    its own ray to the right and counts edge crossings.
    """
    h, w = shape
    out = np.zeros((h, w), dtype=bool)
    n = len(points)
    for r in range(h):
        for c in range(w):
            px, py = c + 0.5, r + 0.5
            crossings = 0
            for i in range(n):
                x0, y0 = points[i]
                x1, y1 = points[(i + 1) % n]
                if (y0 > py) == (y1 > py):
                    continue
                x_at = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
                if x_at > px:
                    crossings += 1
            out[r, c] = crossings % 2 == 1
    return out


def rel_err(got, want):
    got = np.asarray(got, dtype=np.float64)
    want = np.asarray(want, dtype=np.float64)
    denom = max(float(np.max(np.abs(want))), 1e-12)
    return float(np.max(np.abs(got - want))) / denom
