from __future__ import annotations

import math
import random

import pytest

from touchtrail.errors import AnisotropicScreen, CorruptLog, EmptyLog
from touchtrail.fixtures import study_corpus
from touchtrail.ingest import (
    Action,
    DeviceProfile,
    STUDY_DEVICE,
    Session,
    TouchEvent,
    parse_log,
    px_to_mm,
    mm_to_px,
    segment_gestures,
    serialize_session,
)

HEADER = "#device,1920,1080,110.7,62.3"


def make_log(*lines: str) -> str:
    return "\n".join([HEADER, *lines]) + "\n"


# -- parse_log ------------------------------------------------------------------


def test_parse_minimal_log():
    log = make_log("0,0,D,10,20", "10,0,M,15,20", "20,0,U,20,20")
    session = parse_log(log)
    assert len(session.events) == 3
    assert not session.rejected
    assert session.events[0] == TouchEvent(0, Action.DOWN, 10.0, 20.0, 0.0)
    assert session.device == STUDY_DEVICE


def test_parse_rejects_unknown_action_with_line_number():
    lines = [f"{t},0,{a},1,1" for t, a in zip(range(0, 100, 10), "DMMMMMMMMU")]
    lines.insert(5, "999,0,fly,1,1")
    session = parse_log(make_log(*lines))
    assert len(session.events) == 10
    assert len(session.rejected) == 1
    assert session.rejected[0].line_no == 7  # header + 5 good lines before it
    assert "fly" in session.rejected[0].reason


def test_parse_rejects_non_finite_coordinates():
    lines = [f"{t},0,M,1,1" for t in range(0, 200, 10)]
    lines[3] = "30,0,M,nan,1"
    lines[4] = "40,0,M,1,inf"
    session = parse_log(make_log("0,0,D,1,1", *lines[1:], "210,0,U,1,1"))
    reasons = [r.reason for r in session.rejected]
    assert len(reasons) == 2
    assert all("non-finite" in r for r in reasons)


def test_parse_empty_stream_raises():
    with pytest.raises(EmptyLog):
        parse_log("")
    with pytest.raises(EmptyLog):
        parse_log(HEADER + "\n")


def test_parse_too_many_malformed_lines_raises_with_line_numbers():
    lines = ["0,0,D,1,1", "bogus", "also bogus", "10,0,U,1,1"]
    with pytest.raises(CorruptLog) as excinfo:
        parse_log(make_log(*lines))
    assert excinfo.value.line_numbers == (3, 4)


def test_parse_exactly_ten_percent_malformed_is_tolerated():
    good = [f"{t},0,M,1,1" for t in range(10, 100, 10)]
    lines = ["0,0,D,1,1"] + good[:-1] + ["garbage"]  # 1 bad of 10
    session = parse_log(make_log(*lines))
    assert len(session.rejected) == 1


def test_parse_missing_header_requires_device():
    with pytest.raises(CorruptLog):
        parse_log("0,0,D,1,1\n10,0,U,1,1\n")
    session = parse_log("0,0,D,1,1\n10,0,U,1,1\n", device=STUDY_DEVICE)
    assert len(session.events) == 2


def test_parse_normalizes_timestamps_to_session_relative():
    log = make_log("5000,0,D,1,1", "5100,0,U,1,1")
    session = parse_log(log)
    assert [e.t for e in session.events] == [0.0, 100.0]


def test_parse_rejects_out_of_order_timestamps_per_pointer():
    moves = [f"{t},0,M,1,1" for t in range(110, 200, 10)]
    log = make_log("100,0,D,1,1", "50,0,M,1,1", *moves, "200,0,U,1,1")
    session = parse_log(log)
    assert len(session.events) == 11
    assert "decreases" in session.rejected[0].reason


def test_roundtrip_serialize_parse_bit_identical(novice):
    text = serialize_session(novice)
    reparsed = parse_log(text, session_id=novice.session_id)
    assert reparsed.events == novice.events
    assert reparsed.device == novice.device


def test_parse_study_corpus_scale():
    sessions, manifest = study_corpus()
    assert manifest["sessions"] == 45
    reparsed = [parse_log(serialize_session(s), session_id=s.session_id) for s in sessions]
    assert len(reparsed) == 45
    total = sum(len(segment_gestures(s).gestures) for s in reparsed)
    assert total == manifest["total_gestures"]
    assert 350 <= total <= 450  # the study's reported order of magnitude


# -- segment_gestures -------------------------------------------------------------


def _session(events: list[TouchEvent]) -> Session:
    return Session(session_id="t", device=STUDY_DEVICE, events=tuple(events))


def test_segment_single_gesture():
    events = [
        TouchEvent(0, Action.DOWN, 0, 0, 0),
        TouchEvent(0, Action.MOVE, 5, 0, 10),
        TouchEvent(0, Action.UP, 10, 0, 20),
    ]
    session = segment_gestures(_session(events))
    assert len(session.gestures) == 1
    gesture = session.gestures[0]
    assert len(gesture.points) == 3
    assert gesture.duration == 20
    assert not gesture.force_closed
    assert gesture.action_at(0) is Action.DOWN
    assert gesture.action_at(1) is Action.MOVE
    assert gesture.action_at(2) is Action.UP


def test_segment_interleaved_pointers():
    events = [
        TouchEvent(0, Action.DOWN, 100, 100, 0),
        TouchEvent(1, Action.DOWN, 900, 500, 5),
        TouchEvent(0, Action.MOVE, 110, 100, 10),
        TouchEvent(1, Action.UP, 900, 500, 15),
        TouchEvent(0, Action.UP, 120, 100, 20),
    ]
    session = segment_gestures(_session(events))
    assert len(session.gestures) == 2
    by_pointer = {g.pointer_id: g for g in session.gestures}
    assert len(by_pointer[0].points) == 3
    assert len(by_pointer[1].points) == 2
    # ids ascend by start time
    assert session.gestures[0].pointer_id == 0
    assert session.gestures[0].gesture_id == 0


def test_segment_force_closes_unterminated_drag():
    events = [
        TouchEvent(0, Action.DOWN, 0, 0, 0),
        TouchEvent(0, Action.MOVE, 5, 0, 10),
        TouchEvent(0, Action.MOVE, 9, 0, 20),
    ]
    session = segment_gestures(_session(events))
    assert len(session.gestures) == 1
    assert session.gestures[0].force_closed
    assert session.gestures[0].points[-1] == (9, 0, 20)
    assert session.gestures[0].action_at(2) is Action.MOVE


def test_segment_down_reopens_gesture():
    events = [
        TouchEvent(0, Action.DOWN, 0, 0, 0),
        TouchEvent(0, Action.MOVE, 5, 0, 10),
        TouchEvent(0, Action.DOWN, 50, 0, 20),
        TouchEvent(0, Action.UP, 60, 0, 30),
    ]
    session = segment_gestures(_session(events))
    assert len(session.gestures) == 2
    assert session.gestures[0].force_closed
    assert not session.gestures[1].force_closed


def test_segment_orphans_logged_and_excluded():
    events = [
        TouchEvent(0, Action.MOVE, 1, 1, 0),
        TouchEvent(0, Action.UP, 1, 1, 5),
        TouchEvent(0, Action.DOWN, 0, 0, 10),
        TouchEvent(0, Action.UP, 0, 0, 20),
    ]
    session = segment_gestures(_session(events))
    assert len(session.gestures) == 1
    assert len(session.orphans) == 2
    assert session.orphans[0].event_index == 0


def test_segment_partition_conserves_events(novice, expert):
    for session in (novice, expert):
        total = sum(len(g.points) for g in session.gestures) + len(session.orphans)
        assert total == len(session.events)


def test_segment_independent_of_interleaving_order():
    events = [
        TouchEvent(0, Action.DOWN, 0, 0, 0),
        TouchEvent(0, Action.MOVE, 1, 0, 10),
        TouchEvent(0, Action.UP, 2, 0, 20),
        TouchEvent(1, Action.DOWN, 9, 9, 5),
        TouchEvent(1, Action.UP, 9, 9, 15),
    ]
    rng = random.Random(42)
    baseline = None
    for _ in range(10):
        # shuffle while preserving per-pointer relative order
        by_pointer = {0: [e for e in events if e.pointer_id == 0],
                      1: [e for e in events if e.pointer_id == 1]}
        merged: list[TouchEvent] = []
        while by_pointer[0] or by_pointer[1]:
            choices = [p for p in (0, 1) if by_pointer[p]]
            merged.append(by_pointer[rng.choice(choices)].pop(0))
        segmented = segment_gestures(_session(merged))
        key = [(g.gesture_id, g.pointer_id, g.points) for g in segmented.gestures]
        if baseline is None:
            baseline = key
        assert key == baseline


# -- px_to_mm --------------------------------------------------------------------


def test_px_to_mm_full_width_matches_device_width():
    assert px_to_mm(1920, STUDY_DEVICE, axis="width") == pytest.approx(110.7)


def test_px_to_mm_zero():
    assert px_to_mm(0, STUDY_DEVICE) == 0.0


def test_px_to_mm_isotropic_diameter():
    diameter = px_to_mm(2 * 146.331, STUDY_DEVICE)
    assert diameter == pytest.approx(2 * 146.331 * 110.7 / 1920, abs=1e-9)
    assert diameter == pytest.approx(16.87, abs=0.01)


def test_px_to_mm_strict_mode_on_skewed_device():
    skewed = DeviceProfile(width_px=1000, height_px=1000, width_mm=100, height_mm=120)
    with pytest.raises(AnisotropicScreen):
        px_to_mm(10, skewed, strict=True)
    # the study device is near-square in density: strict mode passes
    assert px_to_mm(10, STUDY_DEVICE, strict=True) == pytest.approx(10 * 110.7 / 1920)


def test_mm_to_px_inverts():
    assert mm_to_px(px_to_mm(123.4, STUDY_DEVICE), STUDY_DEVICE) == pytest.approx(123.4)


def test_device_profile_rejects_non_positive_dimensions():
    with pytest.raises(ValueError):
        DeviceProfile(width_px=0, height_px=1080, width_mm=110.7, height_mm=62.3)
    with pytest.raises(ValueError):
        DeviceProfile(width_px=1920, height_px=1080, width_mm=-1, height_mm=62.3)


def test_event_invariants_hold_on_fixtures(novice):
    for e in novice.events:
        assert e.t >= 0 and math.isfinite(e.t)
        assert math.isfinite(e.x) and math.isfinite(e.y)
