"""Mini PACS: file store, HTTP service, and client."""

from .client import ApiError, PacsClient
from .service import BackgroundServer, PacsService, make_server, serve
from .store import FileStore, InstanceRecord

__all__ = [
    "ApiError",
    "PacsClient",
    "BackgroundServer",
    "PacsService",
    "make_server",
    "serve",
    "FileStore",
    "InstanceRecord",
]
