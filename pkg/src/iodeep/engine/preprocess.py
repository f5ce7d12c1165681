"""Slice pixels -> model input tensor.

Formatting order: decode raw buffer, normalize intensities to [0,1]
(MONOCHROME1 inverted so brighter is higher, signed data min-shifted so
extremes map to 0 and 1), adapt channels per the reshape plan, then
resize bilinearly to the target spatial dims.
"""

from __future__ import annotations

import numpy as np

from ..errors import PixelLengthMismatch, UnsupportedPhotometric
from ..images import PixelMeta
from ..netdesc import ReshapePlan
from . import kernels

_LUMA = np.array([0.299, 0.587, 0.114], dtype=np.float32)


def decode_pixel_array(raw: bytes, meta: PixelMeta) -> np.ndarray:
    """Raw little-endian buffer -> (samples, rows, cols) integer array."""
    if meta.bits_allocated == 8:
        dtype = np.int8 if meta.pixel_representation else np.uint8
    elif meta.bits_allocated == 16:
        dtype = np.dtype("<i2") if meta.pixel_representation else np.dtype("<u2")
    else:
        raise PixelLengthMismatch(f"unsupported bits allocated {meta.bits_allocated}")
    expected = meta.rows * meta.columns * meta.samples_per_pixel * (meta.bits_allocated // 8)
    if len(raw) != expected:
        raise PixelLengthMismatch(f"pixel buffer is {len(raw)} bytes, expected {expected}")
    arr = np.frombuffer(raw, dtype=dtype)
    if meta.samples_per_pixel == 1:
        return arr.reshape(1, meta.rows, meta.columns)
    if meta.planar_configuration == 1:
        return arr.reshape(meta.samples_per_pixel, meta.rows, meta.columns)
    return arr.reshape(meta.rows, meta.columns, meta.samples_per_pixel).transpose(2, 0, 1)


def normalize_intensities(arr: np.ndarray, meta: PixelMeta) -> np.ndarray:
    """Scale to [0,1] float32 honoring photometric and representation."""
    photometric = meta.photometric_interpretation
    if photometric not in ("MONOCHROME1", "MONOCHROME2", "RGB"):
        raise UnsupportedPhotometric(f"photometric {photometric!r} not supported")
    if meta.pixel_representation:
        lo = int(arr.min())
        hi = int(arr.max())
        span = hi - lo
        x = (arr.astype(np.float32) - np.float32(lo)) / np.float32(span if span else 1)
    else:
        maxval = np.float32((1 << meta.bits_allocated) - 1)
        x = arr.astype(np.float32) / maxval
    if photometric == "MONOCHROME1":
        x = np.float32(1.0) - x
    return x


def adapt_channels(x: np.ndarray, want_channels: int) -> np.ndarray:
    have = x.shape[0]
    if have == want_channels:
        return x
    if have == 1 and want_channels == 3:
        return np.repeat(x, 3, axis=0)
    if have == 3 and want_channels == 1:
        return np.tensordot(_LUMA, x, axes=([0], [0]))[None, :, :].astype(np.float32)
    raise UnsupportedPhotometric(f"cannot adapt {have} channels to {want_channels}")


def preprocess(raw: bytes, meta: PixelMeta, plan: ReshapePlan) -> np.ndarray:
    """Execute a reshape plan over a raw pixel buffer."""
    x = normalize_intensities(decode_pixel_array(raw, meta), meta)
    want_c, want_h, want_w = plan.target.dims
    if plan.action == "channel_adapt_then_resize":
        x = adapt_channels(x, want_c)
    if x.shape[1:] != (want_h, want_w):
        x = kernels.bilinear_resize(x, want_h, want_w)
    return np.ascontiguousarray(x, dtype=np.float32)
