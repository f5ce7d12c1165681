"""UID validation, generation and well-known UID constants."""

from __future__ import annotations

import random
import threading
import time

from ..errors import InvalidUID

EXPLICIT_VR_LITTLE_ENDIAN = "1.2.840.10008.1.2.1"

# Project org root (example root, digits only so instances stay conformant).
ORG_ROOT = "1.2.826.0.1.3680043.10.463337"

# SOP class registered for network-carrying instances.
IODEEP_SOP_CLASS = ORG_ROOT + ".1"
IMPLEMENTATION_CLASS = ORG_ROOT + ".0.1"

RT_STRUCTURE_SET_STORAGE = "1.2.840.10008.5.1.4.1.1.481.3"
MR_IMAGE_STORAGE = "1.2.840.10008.5.1.4.1.1.4"
CT_IMAGE_STORAGE = "1.2.840.10008.5.1.4.1.1.2"
SECONDARY_CAPTURE_STORAGE = "1.2.840.10008.5.1.4.1.1.7"


def is_valid_uid(uid: str) -> bool:
    """Digits-and-dots grammar, no leading zeros, at most 64 chars."""
    if not uid or len(uid) > 64:
        return False
    for comp in uid.split("."):
        if not comp or not comp.isdigit():
            return False
        if len(comp) > 1 and comp[0] == "0":
            return False
    return True


def validate_uid(uid: str) -> str:
    if not is_valid_uid(uid):
        raise InvalidUID(f"not a valid UID: {uid!r}")
    return uid


_counter_lock = threading.Lock()
_counter = random.randrange(100, 999)


def generate_uid(root: str = ORG_ROOT) -> str:
    """Fresh UID under the given root; unique per process and wall clock."""
    global _counter
    with _counter_lock:
        _counter += 1
        n = _counter
    stamp = int(time.time() * 1000)
    entropy = random.randrange(10**5, 10**6)
    uid = f"{root}.{stamp}.{entropy}.{n}"
    if len(uid) > 64:
        raise InvalidUID(f"generated UID exceeds 64 chars under root {root!r}")
    return uid
