"""Network selection: pick the stored network matching the current slice.

A candidate matches when all three control attributes agree: Modality and
SamplesPerPixel by strict equality, and for the third attribute either the
slice's BodyPartExamined equals the candidate's, or — when the slice has no
body part — the candidate's BodyPartExamined occurs, case-insensitively,
inside the slice's StudyDescription. The first candidate in list order to
reach all three wins; no match is a value, not an error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .iod import IODeepDescriptor, SliceTagSet


@dataclass(frozen=True)
class SelectionResult:
    matched_uid: str | None
    examined: int
    matched_on_description: bool = False

    @property
    def matched(self) -> bool:
        return self.matched_uid is not None


def _fold(s: str | None) -> str:
    # trim, collapse internal whitespace, case-fold
    return re.sub(r"\s+", " ", (s or "").strip()).lower()


def _description_contains(description: str | None, body_part: str | None) -> bool:
    needle = _fold(body_part)
    if not needle:
        return False
    return needle in _fold(description)


def select_network(
    slice_tags: SliceTagSet,
    candidates: Sequence[IODeepDescriptor],
) -> SelectionResult:
    """First candidate whose three control attributes all match the slice."""
    use_description = not slice_tags.has_body_part
    for i, net in enumerate(candidates):
        control = 0
        if slice_tags.modality == net.modality:
            control += 1
        if int(slice_tags.samples_per_pixel) == int(net.samples_per_pixel):
            control += 1
        if use_description:
            if _description_contains(slice_tags.study_description, net.body_part_examined):
                control += 1
        else:
            if slice_tags.body_part_examined == net.body_part_examined:
                control += 1
        if control == 3:
            return SelectionResult(
                matched_uid=net.dnn_uid,
                examined=i + 1,
                matched_on_description=use_description,
            )
    return SelectionResult(matched_uid=None, examined=len(candidates))
