"""Tiny PNG encoder for windowed slice rendering (8-bit gray or RGB)."""

from __future__ import annotations

import struct
import zlib

import numpy as np


def _chunk(kind: bytes, payload: bytes) -> bytes:
    return (struct.pack(">I", len(payload)) + kind + payload
            + struct.pack(">I", zlib.crc32(kind + payload) & 0xFFFFFFFF))


def encode_png(img: np.ndarray) -> bytes:
    """(H,W) uint8 -> grayscale PNG; (H,W,3) uint8 -> truecolor PNG."""
    if img.dtype != np.uint8:
        raise ValueError("PNG encoder expects uint8")
    if img.ndim == 2:
        color_type, channels = 0, 1
    elif img.ndim == 3 and img.shape[2] == 3:
        color_type, channels = 2, 3
    else:
        raise ValueError(f"unsupported image shape {img.shape}")
    h, w = img.shape[:2]
    raw = img.reshape(h, w * channels)
    scanlines = b"".join(b"\x00" + raw[r].tobytes() for r in range(h))
    ihdr = struct.pack(">IIBBBBB", w, h, 8, color_type, 0, 0, 0)
    return (b"\x89PNG\r\n\x1a\n"
            + _chunk(b"IHDR", ihdr)
            + _chunk(b"IDAT", zlib.compress(scanlines, 6))
            + _chunk(b"IEND", b""))


def window_to_uint8(values: np.ndarray, center: float, width: float) -> np.ndarray:
    """Linear VOI windowing onto the 0..255 display range."""
    width = max(float(width), 1e-6)
    lo = float(center) - width / 2.0
    x = (values.astype(np.float64) - lo) / width
    return np.clip(np.rint(x * 255.0), 0, 255).astype(np.uint8)
