"""Touch log parsing, gesture segmentation, and physical-unit conversion.

Log format is newline-delimited UTF-8. The first non-blank line is a device
header::

    #device,width_px,height_px,width_mm,height_mm

followed by one event record per line::

    t_ms,pointer_id,action,x_px,y_px

with action one of ``D`` (finger down), ``M`` (move), ``U`` (lift). Other
lines starting with ``#`` are treated as comments. Timestamps are normalized
to session-relative milliseconds at parse time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import IO, Iterable, Mapping

from .errors import AnisotropicScreen, CorruptLog, EmptyLog

MAX_MALFORMED_FRACTION = 0.10


class Action(str, Enum):
    DOWN = "D"
    MOVE = "M"
    UP = "U"


class Orientation(str, Enum):
    LANDSCAPE_LEFT = "landscape-left"
    PORTRAIT = "portrait"


@dataclass(frozen=True)
class TouchEvent:
    """One down/move/up sample from the touch screen."""

    pointer_id: int
    action: Action
    x: float
    y: float
    t: float  # ms since session start


@dataclass(frozen=True)
class DeviceProfile:
    """Pixel and physical screen dimensions; the px/mm conversion authority."""

    width_px: float
    height_px: float
    width_mm: float
    height_mm: float
    orientation: Orientation = Orientation.LANDSCAPE_LEFT

    def __post_init__(self) -> None:
        for name in ("width_px", "height_px", "width_mm", "height_mm"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"device {name} must be strictly positive, got {value!r}")

    @property
    def mm_per_px_width(self) -> float:
        return self.width_mm / self.width_px

    @property
    def mm_per_px_height(self) -> float:
        return self.height_mm / self.height_px

    @property
    def diagonal_px(self) -> float:
        return math.hypot(self.width_px, self.height_px)


#: Device used throughout the bundled fixtures: 1920x1080 px, 110.7x62.3 mm, landscape.
STUDY_DEVICE = DeviceProfile(width_px=1920, height_px=1080, width_mm=110.7, height_mm=62.3)


@dataclass(frozen=True)
class Gesture:
    """One finger's Down -> Move* -> Up point run.

    ``force_closed`` marks gestures terminated by the end of the stream (or a
    new Down on the same pointer) rather than by an Up event.
    """

    gesture_id: int
    pointer_id: int
    points: tuple[tuple[float, float, float], ...]  # (x, y, t)
    force_closed: bool = False

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError("gesture must hold at least one point")

    @property
    def start_t(self) -> float:
        return self.points[0][2]

    @property
    def end_t(self) -> float:
        return self.points[-1][2]

    @property
    def duration(self) -> float:
        return self.end_t - self.start_t

    def action_at(self, point_index: int) -> Action:
        """Action of the event behind a point: first Down, last Up, Moves between."""
        if point_index == 0:
            return Action.DOWN
        if point_index == len(self.points) - 1 and not self.force_closed:
            return Action.UP
        return Action.MOVE


@dataclass(frozen=True)
class RejectedLine:
    line_no: int
    reason: str
    content: str


@dataclass(frozen=True)
class OrphanEvent:
    """Move/Up with no open gesture for its pointer; excluded from segmentation."""

    event_index: int
    reason: str


@dataclass(frozen=True)
class Session:
    """One recorded interaction session plus everything derived from it."""

    session_id: str
    device: DeviceProfile
    events: tuple[TouchEvent, ...] = ()
    gestures: tuple[Gesture, ...] = ()
    rejected: tuple[RejectedLine, ...] = ()
    orphans: tuple[OrphanEvent, ...] = ()
    metadata: Mapping[str, str] = field(default_factory=dict)

    @property
    def duration(self) -> float:
        if not self.events:
            return 0.0
        ts = [e.t for e in self.events]
        return max(ts) - min(ts)


# -- parsing ------------------------------------------------------------------

def _parse_device_header(fields: list[str], line_no: int) -> DeviceProfile:
    if len(fields) != 5 or fields[0] != "#device":
        raise CorruptLog(f"line {line_no}: malformed device header", (line_no,))
    try:
        return DeviceProfile(*(float(v) for v in fields[1:]))
    except ValueError as exc:
        raise CorruptLog(f"line {line_no}: bad device header: {exc}", (line_no,)) from exc


def _parse_event_line(fields: list[str]) -> TouchEvent:
    if len(fields) != 5:
        raise ValueError(f"expected 5 fields, got {len(fields)}")
    t = float(fields[0])
    if not math.isfinite(t):
        raise ValueError("non-finite timestamp")
    if t < 0:
        raise ValueError("negative timestamp")
    pointer_id = int(fields[1])
    if pointer_id < 0:
        raise ValueError("negative pointer id")
    try:
        action = Action(fields[2])
    except ValueError:
        raise ValueError(f"unknown action {fields[2]!r}") from None
    x, y = float(fields[3]), float(fields[4])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError("non-finite coordinate")
    return TouchEvent(pointer_id=pointer_id, action=action, x=x, y=y, t=t)


def parse_log(
    stream: str | bytes | IO,
    device: DeviceProfile | None = None,
    session_id: str = "session",
    metadata: Mapping[str, str] | None = None,
) -> Session:
    """Parse a raw log into a Session (events only; see segment_gestures).

    Malformed lines are collected on the returned session, never silently
    dropped. An explicit ``device`` argument overrides the file header; the
    header is mandatory when no device is supplied.

    Raises EmptyLog when the stream holds no event records, CorruptLog when
    more than 10% of the data lines are malformed or the device is missing.
    """
    if hasattr(stream, "read"):
        stream = stream.read()
    if isinstance(stream, bytes):
        stream = stream.decode("utf-8")

    events: list[TouchEvent] = []
    rejected: list[RejectedLine] = []
    header_device: DeviceProfile | None = None
    last_t: dict[int, float] = {}
    data_lines = 0

    for line_no, raw in enumerate(stream.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split(",")
        if line.startswith("#"):
            if fields[0] == "#device" and header_device is None:
                header_device = _parse_device_header(fields, line_no)
            continue
        data_lines += 1
        try:
            event = _parse_event_line(fields)
            prev = last_t.get(event.pointer_id)
            if prev is not None and event.t < prev:
                raise ValueError(f"timestamp decreases for pointer {event.pointer_id}")
        except ValueError as exc:
            rejected.append(RejectedLine(line_no=line_no, reason=str(exc), content=line))
            continue
        last_t[event.pointer_id] = event.t
        events.append(event)

    if data_lines == 0:
        raise EmptyLog("log contains no event records")

    if device is None:
        if header_device is None:
            raise CorruptLog("missing #device header and no device profile supplied")
        device = header_device
    if len(rejected) / data_lines > MAX_MALFORMED_FRACTION:
        lines = tuple(r.line_no for r in rejected)
        raise CorruptLog(
            f"{len(rejected)} of {data_lines} lines malformed (lines {', '.join(map(str, lines[:20]))})",
            lines,
        )
    if not events:
        raise EmptyLog("log contains no valid event records")

    # Session-relative time: shift so the earliest event sits at t=0.
    t0 = min(e.t for e in events)
    if t0 != 0.0:
        events = [replace(e, t=e.t - t0) for e in events]

    return Session(
        session_id=session_id,
        device=device,
        events=tuple(events),
        rejected=tuple(rejected),
        metadata=dict(metadata or {}),
    )


def serialize_session(session: Session) -> str:
    """Inverse of parse_log: device header plus one record per event, in stored order.

    Floats use shortest round-trip formatting, so parse_log(serialize_session(s))
    reproduces the events bit-identically.
    """
    d = session.device
    lines = [f"#device,{d.width_px!r},{d.height_px!r},{d.width_mm!r},{d.height_mm!r}"]
    for e in session.events:
        lines.append(f"{e.t!r},{e.pointer_id},{e.action.value},{e.x!r},{e.y!r}")
    return "\n".join(lines) + "\n"


# -- segmentation -------------------------------------------------------------

def segment_gestures(session: Session) -> Session:
    """Split events into per-pointer Down -> Move* -> Up gestures.

    Processing is grouped by pointer_id, so the result does not depend on how
    pointers interleave in the file. Gesture ids are assigned in ascending
    (start_t, pointer_id) order. A Down with no matching Up (end of stream, or
    a fresh Down on the same pointer) closes the open gesture as force_closed.
    Moves and Ups with no open gesture become orphans, logged and excluded.
    """
    per_pointer: dict[int, list[tuple[int, TouchEvent]]] = {}
    for idx, event in enumerate(session.events):
        per_pointer.setdefault(event.pointer_id, []).append((idx, event))

    raw: list[tuple[float, int, int, list[tuple[float, float, float]], bool]] = []
    orphans: list[OrphanEvent] = []

    for pointer_id in sorted(per_pointer):
        open_points: list[tuple[float, float, float]] | None = None
        seq = 0
        for idx, event in per_pointer[pointer_id]:
            point = (event.x, event.y, event.t)
            if event.action is Action.DOWN:
                if open_points is not None:
                    raw.append((open_points[0][2], pointer_id, seq, open_points, True))
                    seq += 1
                open_points = [point]
            elif open_points is None:
                orphans.append(OrphanEvent(event_index=idx, reason=f"{event.action.value} with no open gesture"))
            elif event.action is Action.MOVE:
                open_points.append(point)
            else:  # UP
                open_points.append(point)
                raw.append((open_points[0][2], pointer_id, seq, open_points, False))
                seq += 1
                open_points = None
        if open_points is not None:
            raw.append((open_points[0][2], pointer_id, seq, open_points, True))

    raw.sort(key=lambda item: (item[0], item[1], item[2]))
    gestures = tuple(
        Gesture(gesture_id=gid, pointer_id=pid, points=tuple(points), force_closed=forced)
        for gid, (_, pid, _, points, forced) in enumerate(raw)
    )
    return replace(session, gestures=gestures, orphans=tuple(orphans))


# -- physical units -----------------------------------------------------------

def px_to_mm(value: float, device: DeviceProfile, axis: str | None = None, strict: bool = False) -> float:
    """Convert pixels to millimeters along an axis.

    ``axis`` is "width", "height", or None for isotropic lengths (radii,
    diameters), which use the width factor. With ``strict`` an isotropic
    request errors when the two axis factors differ by more than 1%.
    """
    fw, fh = device.mm_per_px_width, device.mm_per_px_height
    if axis == "width":
        return value * fw
    if axis == "height":
        return value * fh
    if axis is not None:
        raise ValueError(f"unknown axis {axis!r}")
    if strict and abs(fw - fh) / fw > 0.01:
        raise AnisotropicScreen(
            f"axis mm/px factors differ by more than 1%: width {fw:.6f}, height {fh:.6f}"
        )
    return value * fw


def mm_to_px(value: float, device: DeviceProfile, axis: str | None = None) -> float:
    """Inverse of px_to_mm; isotropic conversions use the width factor."""
    if axis == "height":
        return value / device.mm_per_px_height
    return value / device.mm_per_px_width


def validation_report(session: Session) -> str:
    """Human-readable report of rejected lines and orphan events."""
    lines = []
    for r in session.rejected:
        lines.append(f"line {r.line_no}: rejected: {r.reason}: {r.content}")
    for o in session.orphans:
        lines.append(f"event {o.event_index}: orphan: {o.reason}")
    return "\n".join(lines)
