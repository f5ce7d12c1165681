"""Exception taxonomy shared across the package.

Every error raised by public operations derives from :class:`IodeepError`
so callers can catch at whatever granularity they need.
"""


class IodeepError(Exception):
    """Base class for all errors raised by this package."""


# --- DICOM codec ---------------------------------------------------------

class UnsupportedVR(IodeepError):
    """A value representation outside the supported set was requested."""


class UnknownVR(IodeepError):
    """A two-byte VR symbol in the stream is not a known DICOM VR."""


class TruncatedStream(IodeepError):
    """The byte stream ended in the middle of an element."""


class OddGroupWithoutPrivateCreator(IodeepError):
    """A private block element has no matching (gggg,00bb) creator."""


class NotDicom(IodeepError):
    """The file lacks the 128-byte preamble + DICM magic."""


class UnsupportedTransferSyntax(IodeepError):
    """The transfer syntax is not Explicit VR Little Endian."""


class IoFailure(IodeepError):
    """An underlying read or write failed."""


class NonMonotonicTagsWarning(UserWarning):
    """Decoded stream carried tags out of ascending order (kept as-is)."""


# --- IODeep instances -----------------------------------------------------

class InvalidUID(IodeepError):
    """UID string violates the digits-and-dots grammar or length limit."""


class InconsistentPixelSpec(IodeepError):
    """SamplesPerPixel and PhotometricInterpretation disagree."""


class NotIODeep(IodeepError):
    """Dataset does not claim the IODeep SOP class / private block."""


class MissingTag(IodeepError):
    """A mandatory tag is absent from the dataset."""

    def __init__(self, tag, message=None):
        self.tag = tag
        super().__init__(message or f"missing mandatory tag {tag}")


class UIDMismatch(IodeepError):
    """Study/Series/DnnUID do not share the same identifier."""


# --- architecture documents ----------------------------------------------

class MalformedDocument(IodeepError):
    """The architecture document is not valid JSON or misses keys."""


class UnknownLayerKind(IodeepError):
    """A layer declares a kind outside the supported vocabulary."""


class DanglingSkipConnection(IodeepError):
    """A skip connection references a layer id that does not exist."""


class CyclicGraph(IodeepError):
    """Skip wiring would make the layer graph cyclic."""


class InvalidLayerParams(IodeepError):
    """A layer's parameter map is incomplete or out of range."""


class ShapeUnderflow(IodeepError):
    """A spatial dimension would drop below 1."""


class ConcatSpatialMismatch(IodeepError):
    """Concat inputs disagree on spatial dimensions."""


class UnsupportedPhotometric(IodeepError):
    """Photometric interpretation outside MONOCHROME1/2 or RGB."""


# --- inference back-end ---------------------------------------------------

class WeightsNotFound(IodeepError):
    """The weights locator does not resolve to a readable file."""


class ChecksumMismatch(IodeepError):
    """Weights container CRC does not match its payload."""


class FormatVersionUnsupported(IodeepError):
    """Weights container version is newer than this reader."""


class MissingWeight(IodeepError):
    """A parametric layer has no entry in the weight store."""

    def __init__(self, layer_id, name=None):
        self.layer_id = layer_id
        self.name = name
        super().__init__(f"layer {layer_id!r}: no weight entry" + (f" {name!r}" if name else ""))


class WeightShapeMismatch(IodeepError):
    """A bound weight entry has the wrong shape for its layer."""

    def __init__(self, layer_id, expected, found):
        self.layer_id = layer_id
        self.expected = tuple(expected)
        self.found = tuple(found)
        super().__init__(f"layer {layer_id!r}: expected weight shape {self.expected}, found {self.found}")


class ShapeMismatch(IodeepError):
    """Input tensor shape differs from the model's input shape."""


class PixelLengthMismatch(IodeepError):
    """Pixel buffer length disagrees with rows*cols*samples*depth."""


# --- mini PACS / workflow --------------------------------------------------

class NotFound(IodeepError):
    """No stored instance (or payload) under the requested UID."""


class UnindexedTagFilter(IodeepError):
    """A query filter references a tag the index does not keep."""


class FrameMismatch(IodeepError):
    """ROI slice reference differs from the source FrameOfReferenceUID."""


class EmptyRoiSet(IodeepError):
    """No accepted ROI remains; nothing to persist."""


class NoMatchingNetwork(IodeepError):
    """No stored network satisfies the slice's selection attributes."""


class StoreFailure(IodeepError):
    """The PACS store rejected or failed the upload."""


class PipelineError(IodeepError):
    """Failure of a named stage of the ROI prediction pipeline."""

    def __init__(self, stage, cause):
        self.stage = stage
        super().__init__(f"stage {stage!r}: {cause}")
        self.__cause__ = cause
