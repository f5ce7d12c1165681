"""Construction and interpretation of network-carrying DICOM instances.

A network instance groups four modules: the private DNN block (architecture
document, weights locator, display name, UID), Image Pixel expectations the
network was trained for, and the General Study / General Series tags the
selection algorithm matches on. Patient-module tags are present but empty:
these are non-Patient objects.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dicom import DataSet, tags, uids
from .errors import InconsistentPixelSpec, InvalidUID, MissingTag, NotIODeep, UIDMismatch

PRIVATE_CREATOR_ID = "IODEEP"

MONOCHROME_CODES = ("MONOCHROME1", "MONOCHROME2")
SUPPORTED_PHOTOMETRIC = MONOCHROME_CODES + ("RGB",)


@dataclass(frozen=True)
class IODeepDescriptor:
    """Typed view of one stored network instance."""

    dnn_architecture: str
    dnn_weights: str
    dnn_name: str
    dnn_uid: str
    modality: str
    body_part_examined: str
    photometric_interpretation: str = "MONOCHROME2"
    samples_per_pixel: int = 1
    patient_orientation: tuple[str, str] = ("L", "P")
    planar_configuration: int = 0
    study_instance_uid: str = ""
    series_instance_uid: str = ""

    def __post_init__(self):
        # the three identifiers share the DnnUID value unless set explicitly
        if not self.study_instance_uid:
            object.__setattr__(self, "study_instance_uid", self.dnn_uid)
        if not self.series_instance_uid:
            object.__setattr__(self, "series_instance_uid", self.dnn_uid)

    def validate(self) -> "IODeepDescriptor":
        for uid in (self.dnn_uid, self.study_instance_uid, self.series_instance_uid):
            if not uids.is_valid_uid(uid):
                raise InvalidUID(f"bad UID {uid!r}")
        if not (self.study_instance_uid == self.series_instance_uid == self.dnn_uid):
            raise UIDMismatch(
                "StudyInstanceUID, SeriesInstanceUID and DnnUID must share one value")
        if self.photometric_interpretation not in SUPPORTED_PHOTOMETRIC:
            raise InconsistentPixelSpec(
                f"unsupported photometric {self.photometric_interpretation!r}")
        rgb = self.photometric_interpretation == "RGB"
        if (self.samples_per_pixel == 3) != rgb:
            raise InconsistentPixelSpec(
                f"SamplesPerPixel {self.samples_per_pixel} inconsistent with "
                f"{self.photometric_interpretation!r}")
        if self.samples_per_pixel not in (1, 3):
            raise InconsistentPixelSpec("SamplesPerPixel must be 1 or 3")
        if self.planar_configuration not in (0, 1):
            raise InconsistentPixelSpec("PlanarConfiguration must be 0 or 1")
        return self


@dataclass(frozen=True)
class SliceTagSet:
    """The selection-relevant tags read off the slice under diagnosis."""

    modality: str
    samples_per_pixel: int
    body_part_examined: str | None = None
    study_description: str | None = None

    @property
    def has_body_part(self) -> bool:
        return bool(self.body_part_examined)


def build_iodeep(desc: IODeepDescriptor) -> DataSet:
    """Materialize a descriptor as a DataSet ready for encoding."""
    desc.validate()
    ds = DataSet()
    ds.put(tags.SOP_CLASS_UID, "UI", uids.IODEEP_SOP_CLASS)
    ds.put(tags.SOP_INSTANCE_UID, "UI", desc.dnn_uid)
    ds.put(tags.MODALITY, "CS", desc.modality)
    # mandatory Patient-module tags, deliberately zero-length
    ds.put(tags.PATIENT_NAME, "PN", ())
    ds.put(tags.PATIENT_ID, "LO", ())
    ds.put(tags.PATIENT_BIRTH_DATE, "DA", ())
    ds.put(tags.PATIENT_SEX, "CS", ())
    ds.put(tags.DNN_PRIVATE_CREATOR, "LO", PRIVATE_CREATOR_ID)
    ds.put(tags.DNN_ARCHITECTURE, "UT", desc.dnn_architecture)
    ds.put(tags.DNN_WEIGHTS, "UT", desc.dnn_weights)
    ds.put(tags.DNN_NAME, "PN", desc.dnn_name)
    ds.put(tags.DNN_UID, "UI", desc.dnn_uid)
    ds.put(tags.BODY_PART_EXAMINED, "CS", desc.body_part_examined)
    ds.put(tags.STUDY_INSTANCE_UID, "UI", desc.study_instance_uid)
    ds.put(tags.SERIES_INSTANCE_UID, "UI", desc.series_instance_uid)
    ds.put(tags.PATIENT_ORIENTATION, "CS", list(desc.patient_orientation))
    ds.put(tags.SAMPLES_PER_PIXEL, "US", desc.samples_per_pixel)
    ds.put(tags.PHOTOMETRIC_INTERPRETATION, "CS", desc.photometric_interpretation)
    ds.put(tags.PLANAR_CONFIGURATION, "US", desc.planar_configuration)
    return ds


def _require_text(ds: DataSet, tag, what: str) -> str:
    el = ds.get(tag)
    if el is None:
        raise MissingTag(tag, f"missing {what} {tag}")
    return str(el.first() or "")


def parse_iodeep(ds: DataSet) -> IODeepDescriptor:
    """Inverse of :func:`build_iodeep`; rejects non-conforming datasets."""
    if ds.text(tags.SOP_CLASS_UID) != uids.IODEEP_SOP_CLASS:
        raise NotIODeep("SOPClassUID does not claim the network-storage SOP class")
    if ds.text(tags.DNN_PRIVATE_CREATOR) != PRIVATE_CREATOR_ID:
        raise NotIODeep("missing private creator element")
    dnn_uid = _require_text(ds, tags.DNN_UID, "DnnUID")
    study = _require_text(ds, tags.STUDY_INSTANCE_UID, "StudyInstanceUID")
    series = _require_text(ds, tags.SERIES_INSTANCE_UID, "SeriesInstanceUID")
    if not (study == series == dnn_uid):
        raise UIDMismatch(
            f"StudyInstanceUID={study!r} SeriesInstanceUID={series!r} DnnUID={dnn_uid!r}")
    if tags.SAMPLES_PER_PIXEL not in ds:
        raise MissingTag(tags.SAMPLES_PER_PIXEL)
    orientation = ds.texts(tags.PATIENT_ORIENTATION) or ("", "")
    desc = IODeepDescriptor(
        dnn_architecture=_require_text(ds, tags.DNN_ARCHITECTURE, "DnnArchitecture"),
        dnn_weights=_require_text(ds, tags.DNN_WEIGHTS, "DnnWeights"),
        dnn_name=_require_text(ds, tags.DNN_NAME, "DnnName"),
        dnn_uid=dnn_uid,
        modality=_require_text(ds, tags.MODALITY, "Modality"),
        body_part_examined=ds.text(tags.BODY_PART_EXAMINED, ""),
        photometric_interpretation=_require_text(
            ds, tags.PHOTOMETRIC_INTERPRETATION, "PhotometricInterpretation"),
        samples_per_pixel=ds.int(tags.SAMPLES_PER_PIXEL),
        patient_orientation=tuple(orientation[:2]),
        planar_configuration=ds.int(tags.PLANAR_CONFIGURATION, 0),
        study_instance_uid=study,
        series_instance_uid=series,
    )
    return desc.validate()


def slice_tags_of(image_ds: DataSet) -> SliceTagSet:
    """Selection attributes of an image dataset.

    BodyPartExamined is treated as absent when the tag is missing or
    zero-length; StudyDescription mirrors its tag verbatim.
    """
    if tags.MODALITY not in image_ds or image_ds[tags.MODALITY].is_empty:
        raise MissingTag(tags.MODALITY)
    if tags.SAMPLES_PER_PIXEL not in image_ds or image_ds[tags.SAMPLES_PER_PIXEL].is_empty:
        raise MissingTag(tags.SAMPLES_PER_PIXEL)
    body_part = image_ds.text(tags.BODY_PART_EXAMINED, "")
    descr = image_ds.text(tags.STUDY_DESCRIPTION, "")
    return SliceTagSet(
        modality=image_ds.text(tags.MODALITY),
        samples_per_pixel=image_ds.int(tags.SAMPLES_PER_PIXEL),
        body_part_examined=body_part or None,
        study_description=descr or None,
    )
