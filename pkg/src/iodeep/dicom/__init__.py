"""Minimal DICOM data-set model and Part-10 file codec.

Supports Explicit VR Little Endian only, a closed VR set, and explicit
sequence lengths — enough for image objects, network-carrying instances
and RT Structure Sets, with bit-exact round trips.
"""

from .tags import Tag
from .vr import VR, SUPPORTED_VRS
from .dataset import DataElement, DataSet
from .codec import encode_dataset, decode_dataset
from .filefmt import DicomFile, read_file, write_file
from . import uids

__all__ = [
    "Tag",
    "VR",
    "SUPPORTED_VRS",
    "DataElement",
    "DataSet",
    "encode_dataset",
    "decode_dataset",
    "DicomFile",
    "read_file",
    "write_file",
    "uids",
]
