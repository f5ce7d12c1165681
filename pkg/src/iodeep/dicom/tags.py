"""Data element tags and the tag constants used across the package."""

from __future__ import annotations

import functools


@functools.total_ordering
class Tag:
    """A (group, element) pair of unsigned 16-bit numbers.

    Ordering is lexicographic on (group, element); the canonical rendering
    is ``(GGGG, EEEE)`` in uppercase hex.
    """

    __slots__ = ("group", "element")

    def __init__(self, group: int, element: int):
        if not (0 <= group <= 0xFFFF and 0 <= element <= 0xFFFF):
            raise ValueError(f"tag components out of 16-bit range: {group:#x},{element:#x}")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "element", element)

    def __setattr__(self, name, value):
        raise AttributeError("Tag is immutable")

    @property
    def is_private(self) -> bool:
        return self.group % 2 == 1

    @property
    def key(self) -> tuple[int, int]:
        return (self.group, self.element)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tag):
            return NotImplemented
        return self.key == other.key

    def __lt__(self, other) -> bool:
        if not isinstance(other, Tag):
            return NotImplemented
        return self.key < other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"({self.group:04X}, {self.element:04X})"


# Identification / general modules
SOP_CLASS_UID = Tag(0x0008, 0x0016)
SOP_INSTANCE_UID = Tag(0x0008, 0x0018)
STUDY_DATE = Tag(0x0008, 0x0020)
STUDY_TIME = Tag(0x0008, 0x0030)
ACCESSION_NUMBER = Tag(0x0008, 0x0050)
MODALITY = Tag(0x0008, 0x0060)
INSTITUTION_NAME = Tag(0x0008, 0x0080)
REFERRING_PHYSICIAN_NAME = Tag(0x0008, 0x0090)
STUDY_DESCRIPTION = Tag(0x0008, 0x1030)

# Patient module
PATIENT_NAME = Tag(0x0010, 0x0010)
PATIENT_ID = Tag(0x0010, 0x0020)
PATIENT_BIRTH_DATE = Tag(0x0010, 0x0030)
PATIENT_SEX = Tag(0x0010, 0x0040)

# DNN private block: creator at (0017,0010), payload in block 0x10
DNN_PRIVATE_GROUP = 0x0017
DNN_PRIVATE_CREATOR = Tag(0x0017, 0x0010)
DNN_ARCHITECTURE = Tag(0x0017, 0x1001)
DNN_WEIGHTS = Tag(0x0017, 0x1002)
DNN_NAME = Tag(0x0017, 0x1003)
DNN_UID = Tag(0x0017, 0x1004)

# Body part / study-series hierarchy
BODY_PART_EXAMINED = Tag(0x0018, 0x0015)
STUDY_ID = Tag(0x0020, 0x0010)
STUDY_INSTANCE_UID = Tag(0x0020, 0x000D)
SERIES_INSTANCE_UID = Tag(0x0020, 0x000E)
PATIENT_ORIENTATION = Tag(0x0020, 0x0020)
FRAME_OF_REFERENCE_UID = Tag(0x0020, 0x0052)

# Image pixel module
SAMPLES_PER_PIXEL = Tag(0x0028, 0x0002)
PHOTOMETRIC_INTERPRETATION = Tag(0x0028, 0x0004)
PLANAR_CONFIGURATION = Tag(0x0028, 0x0006)
ROWS = Tag(0x0028, 0x0010)
COLUMNS = Tag(0x0028, 0x0011)
BITS_ALLOCATED = Tag(0x0028, 0x0100)
PIXEL_REPRESENTATION = Tag(0x0028, 0x0103)

# RT Structure Set
STRUCTURE_SET_LABEL = Tag(0x3006, 0x0002)
STRUCTURE_SET_ROI_SEQUENCE = Tag(0x3006, 0x0020)
ROI_NUMBER = Tag(0x3006, 0x0022)
REFERENCED_FRAME_OF_REFERENCE_UID = Tag(0x3006, 0x0024)
ROI_NAME = Tag(0x3006, 0x0026)
ROI_CONTOUR_SEQUENCE = Tag(0x3006, 0x0039)
CONTOUR_SEQUENCE = Tag(0x3006, 0x0040)
CONTOUR_GEOMETRIC_TYPE = Tag(0x3006, 0x0042)
NUMBER_OF_CONTOUR_POINTS = Tag(0x3006, 0x0046)
CONTOUR_DATA = Tag(0x3006, 0x0050)
REFERENCED_ROI_NUMBER = Tag(0x3006, 0x0084)

# Approval module
APPROVAL_STATUS = Tag(0x300E, 0x0002)
REVIEW_DATE = Tag(0x300E, 0x0004)
REVIEW_TIME = Tag(0x300E, 0x0005)
REVIEWER_NAME = Tag(0x300E, 0x0008)

# Pixel data
PIXEL_DATA = Tag(0x7FE0, 0x0010)

# File meta (group 0002)
FILE_META_GROUP_LENGTH = Tag(0x0002, 0x0000)
FILE_META_VERSION = Tag(0x0002, 0x0001)
MEDIA_SOP_CLASS_UID = Tag(0x0002, 0x0002)
MEDIA_SOP_INSTANCE_UID = Tag(0x0002, 0x0003)
TRANSFER_SYNTAX_UID = Tag(0x0002, 0x0010)
IMPLEMENTATION_CLASS_UID = Tag(0x0002, 0x0012)

# Sequence item framing
ITEM = Tag(0xFFFE, 0xE000)
ITEM_DELIMITER = Tag(0xFFFE, 0xE00D)
SEQUENCE_DELIMITER = Tag(0xFFFE, 0xE0DD)
