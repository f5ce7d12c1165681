"""Synthetic phantom slices: gaussian blobs with known ground truth.

Used to exercise the full pipeline at desk scale — the generator provides
both the pixel data and the reference mask, so segmentation quality is
measurable without any external dataset.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dicom import DataSet
from .images import build_image_dataset

SIZE = 64
GT_LEVEL = 0.45
MARGIN = 12.0
MIN_SEPARATION = 22.0


@dataclass(frozen=True)
class Phantom:
    image: np.ndarray      # uint8 (SIZE, SIZE)
    field: np.ndarray      # noiseless float64 in [0,1]
    ground_truth: np.ndarray  # bool (SIZE, SIZE)
    n_blobs: int


def make_blob_field(rng: np.random.Generator, size: int = SIZE,
                    n_blobs: int | None = None) -> Phantom:
    """Well-separated gaussian bumps; ground truth is field >= GT_LEVEL."""
    if n_blobs is None:
        n_blobs = int(rng.integers(1, 4))
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    field = np.zeros((size, size), dtype=np.float64)
    centers: list[tuple[float, float]] = []
    attempts = 0
    while len(centers) < n_blobs and attempts < 500:
        attempts += 1
        cy, cx = rng.uniform(MARGIN, size - MARGIN, size=2)
        if all((cy - y) ** 2 + (cx - x) ** 2 >= MIN_SEPARATION**2 for y, x in centers):
            centers.append((cy, cx))
    for cy, cx in centers:
        sigma = rng.uniform(3.5, 5.5)
        amp = rng.uniform(0.75, 1.0)
        field += amp * np.exp(-((yy - cy) ** 2 + (xx - cx) ** 2) / (2 * sigma**2))
    field = np.clip(field, 0.0, 1.0)
    noisy = np.clip(field + rng.normal(0, 0.015, size=field.shape), 0.0, 1.0)
    return Phantom(
        image=np.rint(noisy * 255).astype(np.uint8),
        field=field,
        ground_truth=field >= GT_LEVEL,
        n_blobs=len(centers),
    )


def make_blob_slice(rng: np.random.Generator, *, modality: str = "MR",
                    body_part: str = "PHANTOM", study_uid: str | None = None,
                    series_uid: str | None = None, patient_id: str = "PHANTOM001",
                    n_blobs: int | None = None) -> tuple[DataSet, Phantom]:
    """A MONOCHROME2 image dataset around a fresh phantom."""
    phantom = make_blob_field(rng, n_blobs=n_blobs)
    ds = build_image_dataset(
        phantom.image,
        modality=modality,
        body_part=body_part,
        study_description="Synthetic blob phantom",
        patient_name="PHANTOM^SYNTH",
        patient_id=patient_id,
        study_uid=study_uid,
        series_uid=series_uid,
    )
    return ds, phantom


def dice(pred: np.ndarray, truth: np.ndarray) -> float:
    """2|A∩B| / (|A|+|B|); 1.0 when both masks are empty."""
    pred = pred.astype(bool)
    truth = truth.astype(bool)
    denom = int(pred.sum()) + int(truth.sum())
    if denom == 0:
        return 1.0
    return 2.0 * int((pred & truth).sum()) / denom
