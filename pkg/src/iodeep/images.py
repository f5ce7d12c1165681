"""Image-object helpers: pixel metadata extraction and slice construction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dicom import DataSet, tags, uids
from .errors import MissingTag


@dataclass(frozen=True)
class PixelMeta:
    """The Image Pixel attributes that drive tensor formatting."""

    samples_per_pixel: int
    rows: int
    columns: int
    photometric_interpretation: str
    pixel_representation: int  # 0 unsigned, 1 signed
    bits_allocated: int = 8
    planar_configuration: int = 0


def pixel_meta_of(ds: DataSet) -> PixelMeta:
    for tag in (tags.SAMPLES_PER_PIXEL, tags.ROWS, tags.COLUMNS,
                tags.PHOTOMETRIC_INTERPRETATION):
        if tag not in ds:
            raise MissingTag(tag)
    return PixelMeta(
        samples_per_pixel=ds.int(tags.SAMPLES_PER_PIXEL),
        rows=ds.int(tags.ROWS),
        columns=ds.int(tags.COLUMNS),
        photometric_interpretation=ds.text(tags.PHOTOMETRIC_INTERPRETATION),
        pixel_representation=ds.int(tags.PIXEL_REPRESENTATION, 0),
        bits_allocated=ds.int(tags.BITS_ALLOCATED, 8),
        planar_configuration=ds.int(tags.PLANAR_CONFIGURATION, 0),
    )


def build_image_dataset(
    pixels: np.ndarray,
    *,
    modality: str = "MR",
    body_part: str = "",
    study_description: str = "",
    photometric: str = "MONOCHROME2",
    patient_name: str = "",
    patient_id: str = "",
    study_uid: str | None = None,
    series_uid: str | None = None,
    frame_of_reference_uid: str | None = None,
    sop_instance_uid: str | None = None,
    signed: bool = False,
) -> DataSet:
    """A single-frame image dataset around a pixel array.

    ``pixels`` is (rows, cols) for monochrome or (rows, cols, 3) for RGB,
    dtype uint8/int8 (OB) or uint16/int16 (OW), interleaved when RGB.
    """
    if pixels.ndim == 2:
        rows, cols = pixels.shape
        samples = 1
    elif pixels.ndim == 3 and pixels.shape[2] == 3:
        rows, cols, samples = pixels.shape
    else:
        raise ValueError(f"unsupported pixel array shape {pixels.shape}")
    if pixels.dtype.itemsize == 1:
        bits, pixel_vr = 8, "OB"
    elif pixels.dtype.itemsize == 2:
        bits, pixel_vr = 16, "OW"
    else:
        raise ValueError(f"unsupported pixel dtype {pixels.dtype}")

    ds = DataSet()
    sop_class = uids.MR_IMAGE_STORAGE if modality == "MR" else (
        uids.CT_IMAGE_STORAGE if modality == "CT" else uids.SECONDARY_CAPTURE_STORAGE)
    ds.put(tags.SOP_CLASS_UID, "UI", sop_class)
    ds.put(tags.SOP_INSTANCE_UID, "UI", sop_instance_uid or uids.generate_uid())
    ds.put(tags.MODALITY, "CS", modality)
    if study_description:
        ds.put(tags.STUDY_DESCRIPTION, "LO", study_description)
    ds.put(tags.PATIENT_NAME, "PN", patient_name)
    ds.put(tags.PATIENT_ID, "LO", patient_id)
    ds.put(tags.PATIENT_BIRTH_DATE, "DA", ())
    ds.put(tags.PATIENT_SEX, "CS", ())
    if body_part:
        ds.put(tags.BODY_PART_EXAMINED, "CS", body_part)
    ds.put(tags.STUDY_INSTANCE_UID, "UI", study_uid or uids.generate_uid())
    ds.put(tags.SERIES_INSTANCE_UID, "UI", series_uid or uids.generate_uid())
    ds.put(tags.FRAME_OF_REFERENCE_UID, "UI", frame_of_reference_uid or uids.generate_uid())
    ds.put(tags.SAMPLES_PER_PIXEL, "US", samples)
    ds.put(tags.PHOTOMETRIC_INTERPRETATION, "CS", photometric)
    if samples == 3:
        ds.put(tags.PLANAR_CONFIGURATION, "US", 0)
    ds.put(tags.ROWS, "US", rows)
    ds.put(tags.COLUMNS, "US", cols)
    ds.put(tags.BITS_ALLOCATED, "US", bits)
    ds.put(tags.PIXEL_REPRESENTATION, "US", 1 if signed else 0)
    wire = np.ascontiguousarray(pixels).astype(pixels.dtype.newbyteorder("<"), copy=False)
    ds.put(tags.PIXEL_DATA, pixel_vr, wire.tobytes())
    return ds
