"""DICOM-native storage, selection and inference of trained networks."""

__version__ = "0.1.0"

from . import dicom, engine, errors, images, iod, netdesc, pacs, rtstruct, selection, workflow

__all__ = [
    "dicom",
    "engine",
    "errors",
    "images",
    "iod",
    "netdesc",
    "pacs",
    "rtstruct",
    "selection",
    "workflow",
    "__version__",
]
