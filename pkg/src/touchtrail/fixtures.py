"""Deterministic synthetic sessions for tests, demos, and golden workflows.

Every generator is seeded and free of wall-clock or filesystem dependence, so
repeated runs produce byte-identical logs. The scenarios mirror typical
joystick-plus-skill-buttons play: a left-thumb pointer dragging inside the
joystick disc and a right-thumb pointer tapping the five skill buttons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .ingest import (
    Action,
    DeviceProfile,
    Session,
    STUDY_DEVICE,
    TouchEvent,
    segment_gestures,
)
from .layout import CircleArea, SemanticRegion


def skill_regions() -> list[SemanticRegion]:
    """Five non-overlapping skill circles on the right half of the study device."""
    specs = [
        ("normal_attack", "Normal Attack", 1700.0, 880.0, 90.0, 0),
        ("skill_1", "skill 1", 1500.0, 920.0, 60.0, 1),
        ("skill_2", "skill 2", 1560.0, 760.0, 60.0, 2),
        ("skill_3", "skill 3", 1660.0, 620.0, 60.0, 3),
        ("skill_4", "skill 4", 1790.0, 540.0, 60.0, 4),
    ]
    return [
        SemanticRegion(region_id=rid, label=label, cx=cx, cy=cy, radius=r, ring_index=ring)
        for rid, label, cx, cy, r, ring in specs
    ]


def joystick_area() -> CircleArea:
    """Left-thumb joystick disc on the study device."""
    return CircleArea(cx=420.0, cy=760.0, radius=300.0)


SKILL_ORDER = ("normal_attack", "skill_1", "skill_2", "skill_3", "skill_4")


@dataclass
class _EventBuilder:
    events: list[TouchEvent] = field(default_factory=list)

    def tap(self, pointer: int, t: float, x: float, y: float, dwell: float = 30.0) -> None:
        x, y = round(x, 2), round(y, 2)
        self.events.append(TouchEvent(pointer, Action.DOWN, x, y, round(t, 1)))
        self.events.append(TouchEvent(pointer, Action.UP, x, y, round(t + dwell, 1)))

    def drag(
        self,
        pointer: int,
        t0: float,
        duration: float,
        waypoints: list[tuple[float, float]],
        step_ms: float = 50.0,
    ) -> None:
        """Constant-speed drag along the waypoint polyline, sampled every step_ms."""
        seg = [
            math.hypot(waypoints[i + 1][0] - waypoints[i][0], waypoints[i + 1][1] - waypoints[i][1])
            for i in range(len(waypoints) - 1)
        ]
        total = sum(seg)
        n_moves = max(1, int(duration / step_ms) - 1)

        def at(dist: float) -> tuple[float, float]:
            run = 0.0
            for i, length in enumerate(seg):
                if run + length >= dist and length > 0:
                    f = (dist - run) / length
                    ax, ay = waypoints[i]
                    bx, by = waypoints[i + 1]
                    return ax + f * (bx - ax), ay + f * (by - ay)
                run += length
            return waypoints[-1]

        x0, y0 = waypoints[0]
        self.events.append(TouchEvent(pointer, Action.DOWN, round(x0, 2), round(y0, 2), round(t0, 1)))
        for j in range(1, n_moves + 1):
            frac = j / (n_moves + 1)
            x, y = at(frac * total)
            self.events.append(
                TouchEvent(pointer, Action.MOVE, round(x, 2), round(y, 2), round(t0 + frac * duration, 1))
            )
        xe, ye = waypoints[-1]
        self.events.append(
            TouchEvent(pointer, Action.UP, round(xe, 2), round(ye, 2), round(t0 + duration, 1))
        )

    def build(self, session_id: str, device: DeviceProfile = STUDY_DEVICE, **metadata: str) -> Session:
        ordered = sorted(self.events, key=lambda e: (e.t, e.pointer_id))
        session = Session(
            session_id=session_id, device=device, events=tuple(ordered), metadata=dict(metadata)
        )
        return segment_gestures(session)


def _jitter(rng: np.random.Generator, scale: float) -> float:
    return float(rng.uniform(-scale, scale))


def _wander(rng: np.random.Generator, area: CircleArea, n_waypoints: int) -> list[tuple[float, float]]:
    """Random waypoints inside a disc, biased to stay away from the rim."""
    pts = []
    for _ in range(n_waypoints):
        angle = rng.uniform(0, 2 * math.pi)
        radius = area.radius * 0.85 * math.sqrt(rng.uniform(0, 1))
        pts.append((area.cx + radius * math.cos(angle), area.cy + radius * math.sin(angle)))
    return pts


def _skill_tap(b: _EventBuilder, rng: np.random.Generator, region: SemanticRegion, t: float) -> None:
    b.tap(1, t, region.cx + _jitter(rng, region.radius / 3), region.cy + _jitter(rng, region.radius / 3))


def novice_session(seed: int = 101) -> Session:
    """Three movement gestures and strategy-free clockwise skill mashing.

    The last movement lasts 107 s of the 120 s session; skills fire in bursts
    cycling through all five buttons regardless of what the joystick does.
    """
    rng = np.random.default_rng(seed)
    regions = {r.region_id: r for r in skill_regions()}
    stick = joystick_area()
    b = _EventBuilder()

    b.drag(0, 0.0, 4000.0, [(420.0, 760.0), (560.0 + _jitter(rng, 20), 690.0 + _jitter(rng, 20))])
    b.drag(0, 5000.0, 4000.0, [(430.0, 750.0), (330.0 + _jitter(rng, 20), 840.0 + _jitter(rng, 20))])
    b.drag(0, 13000.0, 107000.0, [(420.0, 760.0)] + _wander(rng, stick, 10), step_ms=200.0)

    for burst_start in range(15000, 110000, 15000):
        for i, rid in enumerate(SKILL_ORDER):
            _skill_tap(b, rng, regions[rid], burst_start + i * 800.0)
    for t in (22000.0, 52000.0, 82000.0, 112000.0):
        _skill_tap(b, rng, regions["normal_attack"], t)

    return b.build("novice", expertise="novice")


def expert_session(seed: int = 202) -> Session:
    """Four long joystick movements, each followed by a coordinated skill combo."""
    rng = np.random.default_rng(seed)
    regions = {r.region_id: r for r in skill_regions()}
    stick = joystick_area()
    b = _EventBuilder()

    _skill_tap(b, rng, regions["normal_attack"], 0.0)
    for move_start in (5000.0, 35000.0, 65000.0, 95000.0):
        b.drag(0, move_start, 20000.0, [(420.0, 760.0)] + _wander(rng, stick, 6), step_ms=150.0)
        combo_start = move_start + 20500.0
        for i, rid in enumerate(("normal_attack", "skill_1", "skill_2", "skill_3")):
            _skill_tap(b, rng, regions[rid], combo_start + i * 400.0)
        _skill_tap(b, rng, regions["normal_attack"], move_start + 9000.0)

    return b.build("expert", expertise="expert")


def two_motif_session(n_per_motif: int = 20, seed: int = 7) -> tuple[Session, dict]:
    """Two well-separated drag motifs for clustering recovery tests.

    Motif 0: rightward drags on the left half; motif 1: leftward drags on the
    right half. Gesture ids follow start time, so ids [0, n) are motif 0 and
    [n, 2n) are motif 1; the manifest records the labeling.
    """
    rng = np.random.default_rng(seed)
    b = _EventBuilder()
    t = 0.0
    for _ in range(n_per_motif):
        x0, y0 = 350.0 + _jitter(rng, 25), 420.0 + _jitter(rng, 25)
        b.drag(0, t, 600.0, [(x0, y0), (x0 + 300.0 + _jitter(rng, 25), y0 + _jitter(rng, 25))])
        t += 1500.0
    for _ in range(n_per_motif):
        x0, y0 = 1450.0 + _jitter(rng, 25), 420.0 + _jitter(rng, 25)
        b.drag(0, t, 600.0, [(x0, y0), (x0 - 300.0 + _jitter(rng, 25), y0 + _jitter(rng, 25))])
        t += 1500.0

    session = b.build("two-motif")
    manifest = {
        "k": 2,
        "sizes": [n_per_motif, n_per_motif],
        "labels": {gid: (0 if gid < n_per_motif else 1) for gid in range(2 * n_per_motif)},
    }
    return session, manifest


def study_corpus(n_sessions: int = 45, seed: int = 11) -> tuple[list[Session], dict]:
    """Sessions shaped like the UI-verification study: 45 runs, ~400 gestures.

    Each session holds 4 joystick drags and 5 skill taps (one per button).
    The manifest records exact counts for oracle checks.
    """
    rng = np.random.default_rng(seed)
    regions = skill_regions()
    stick = joystick_area()
    sessions: list[Session] = []
    per_session: list[dict] = []

    for index in range(n_sessions):
        participant, attempt = divmod(index, 5)
        b = _EventBuilder()
        for i in range(4):
            angle = rng.uniform(0, 2 * math.pi)
            radius = stick.radius * 0.5 * math.sqrt(rng.uniform(0, 1))
            x0 = stick.cx + radius * math.cos(angle)
            y0 = stick.cy + radius * math.sin(angle)
            length = rng.uniform(250.0, 550.0)
            heading = rng.uniform(0, 2 * math.pi)
            x1 = min(max(x0 + length * math.cos(heading), 40.0), 900.0)
            y1 = min(max(y0 + length * math.sin(heading), 40.0), 1040.0)
            b.drag(0, 2000.0 + i * 12000.0, rng.uniform(1500.0, 3500.0), [(x0, y0), (x1, y1)])
        for i, region in enumerate(regions):
            _skill_tap(b, rng, region, 4000.0 + i * 9000.0 + rng.uniform(0, 2000.0))
        session = b.build(
            f"p{participant + 1:02d}_a{attempt + 1}",
            participant=f"p{participant + 1:02d}",
            attempt=str(attempt + 1),
        )
        sessions.append(session)
        per_session.append({"session_id": session.session_id, "gestures": len(session.gestures)})

    manifest = {
        "sessions": n_sessions,
        "total_gestures": sum(p["gestures"] for p in per_session),
        "movement_gestures_per_session": 4,
        "tap_gestures_per_session": 5,
        "per_session": per_session,
    }
    return sessions, manifest


def gaussian_blob(n: int, center: tuple[float, float], sigma: float, seed: int = 0) -> np.ndarray:
    """n points drawn from an isotropic Gaussian; raw coordinates, no clipping."""
    rng = np.random.default_rng(seed)
    return rng.normal(loc=center, scale=sigma, size=(n, 2))


def blob_tap_session(points: np.ndarray, session_id: str = "blob") -> Session:
    """One tap per blob point, for driving region fitting through the log pipeline."""
    b = _EventBuilder()
    for i, (x, y) in enumerate(points):
        b.tap(0, i * 100.0, float(x), float(y))
    return b.build(session_id)
