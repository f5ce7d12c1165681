"""Selection tests with an independent brute-force oracle."""

import re

from hypothesis import given, settings, strategies as st

from iodeep.iod import IODeepDescriptor, SliceTagSet
from iodeep.selection import SelectionResult, select_network


def make_net(modality="MR", samples=1, body_part="BREAST", uid=None):
    return IODeepDescriptor(
        dnn_architecture="{}",
        dnn_weights="iodeep:weights/x",
        dnn_name="net",
        dnn_uid=uid or f"1.2.{abs(hash((modality, samples, body_part))) % 10**8}",
        modality=modality,
        body_part_examined=body_part,
        samples_per_pixel=samples,
        photometric_interpretation="RGB" if samples == 3 else "MONOCHROME2",
    )


# Written independently of the implementation: filter the candidate list,
# then take the first survivor.
def oracle(slice_tags, candidates):
    def squash(s):
        return re.sub(r"\s+", " ", (s or "").strip()).lower()

    matches = []
    for net in candidates:
        ok_modality = slice_tags.modality == net.modality
        ok_samples = int(slice_tags.samples_per_pixel) == int(net.samples_per_pixel)
        if slice_tags.body_part_examined:
            ok_third = slice_tags.body_part_examined == net.body_part_examined
        else:
            part = squash(net.body_part_examined)
            ok_third = bool(part) and part in squash(slice_tags.study_description)
        if ok_modality and ok_samples and ok_third:
            matches.append(net)
    return matches[0].dnn_uid if matches else None


def test_equality_path_picks_first_full_match():
    slice_tags = SliceTagSet("MR", 1, "BREAST", None)
    nets = [make_net("CT", 1, "ABDOMEN", uid="1.2.10"), make_net("MR", 1, "BREAST", uid="1.2.11")]
    result = select_network(slice_tags, nets)
    assert result.matched_uid == "1.2.11"
    assert result.examined == 2
    assert not result.matched_on_description


def test_description_containment_path():
    slice_tags = SliceTagSet("MR", 1, None, "routine brain tumor follow-up")
    net = make_net("MR", 1, "BRAIN TUMOR", uid="1.2.20")
    result = select_network(slice_tags, [net])
    assert result.matched_uid == "1.2.20"
    assert result.matched_on_description


def test_empty_candidates_no_match():
    result = select_network(SliceTagSet("MR", 1, "BREAST", None), [])
    assert result == SelectionResult(None, 0)


def test_samples_mismatch_blocks():
    slice_tags = SliceTagSet("MR", 3, "BREAST", None)
    assert not select_network(slice_tags, [make_net("MR", 1, "BREAST")]).matched


def test_first_match_wins_over_duplicates():
    slice_tags = SliceTagSet("MR", 1, "BREAST", None)
    nets = [make_net("MR", 1, "BREAST", uid="1.2.1"), make_net("MR", 1, "BREAST", uid="1.2.2")]
    assert select_network(slice_tags, nets).matched_uid == "1.2.1"


def test_description_path_used_iff_body_part_absent():
    # body part present: candidate matching only the description must lose
    with_bp = SliceTagSet("MR", 1, "CHEST", "chest and abdomen survey")
    net = make_net("MR", 1, "ABDOMEN")
    assert not select_network(with_bp, [net]).matched
    # body part absent: the same candidate now matches via containment
    without_bp = SliceTagSet("MR", 1, None, "chest and abdomen survey")
    assert select_network(without_bp, [net]).matched


def test_containment_is_case_insensitive_and_whitespace_folded():
    slice_tags = SliceTagSet("MR", 1, None, "Routine   Brain  Tumor scan")
    net = make_net("MR", 1, "brain tumor")
    assert select_network(slice_tags, [net]).matched


def test_empty_candidate_body_part_never_matches_description():
    slice_tags = SliceTagSet("MR", 1, None, "anything at all")
    assert not select_network(slice_tags, [make_net("MR", 1, "")]).matched


# --- randomized oracle equivalence -----------------------------------------

_modalities = st.sampled_from(["MR", "CT", "PT"])
_samples = st.sampled_from([1, 3])
_parts = st.sampled_from(["BREAST", "ABDOMEN", "CHEST", "BRAIN TUMOR"])
_descriptions = st.sampled_from([
    "routine brain tumor follow-up",
    "BREAST screening protocol",
    "no anatomical hint here",
    None,
])


@st.composite
def slices(draw):
    body = draw(st.one_of(st.none(), _parts))
    return SliceTagSet(
        modality=draw(_modalities),
        samples_per_pixel=draw(_samples),
        body_part_examined=body,
        study_description=draw(_descriptions),
    )


@st.composite
def candidate_lists(draw):
    n = draw(st.integers(0, 6))
    return [
        make_net(draw(_modalities), draw(_samples), draw(_parts), uid=f"1.2.{i}")
        for i in range(n)
    ]


@given(slices(), candidate_lists())
@settings(max_examples=300, deadline=None)
def test_agrees_with_bruteforce_oracle(slice_tags, nets):
    assert select_network(slice_tags, nets).matched_uid == oracle(slice_tags, nets)


@given(slices(), candidate_lists())
@settings(max_examples=150, deadline=None)
def test_duplicating_match_later_changes_nothing(slice_tags, nets):
    result = select_network(slice_tags, nets)
    if result.matched:
        matched = next(n for n in nets if n.dnn_uid == result.matched_uid)
        extended = nets + [matched]
        assert select_network(slice_tags, extended).matched_uid == result.matched_uid


@given(slices(), candidate_lists(), _parts)
@settings(max_examples=150, deadline=None)
def test_modality_failure_is_final(slice_tags, nets, new_part):
    # if a candidate fails on modality, flipping its body part can't matter
    for i, net in enumerate(nets):
        if net.modality != slice_tags.modality:
            flipped = list(nets)
            flipped[i] = make_net(net.modality, net.samples_per_pixel, new_part, uid=net.dnn_uid)
            a = select_network(slice_tags, nets).matched_uid
            b = select_network(slice_tags, flipped).matched_uid
            assert a == b
            break
