"""Radial spatiotemporal layout, semantic-circle mapping, heat map, and spatial queries.

The session timeline wraps clockwise around concentric rings starting at 12
o'clock: finger-down dots on the inner ring, moves on the middle ring, lifts
on the outer ring. Each gesture contributes an arc between its down and lift
dots whose height encodes duration. User-defined semantic regions (skill
buttons) get their own outer rings; a down event inside a region produces a
dot on that region's ring at the event's time angle.

All layout coordinates are resolution independent: angles in radians, radii
as fractions of the layout radius. Rendering scale is the consumer's concern.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import AmbiguousRegions, DegeneratePeriod
from .ingest import Action, Gesture, Session

TAU = 2.0 * math.pi


@dataclass(frozen=True)
class LayoutConfig:
    ring_touch: float = 0.30
    ring_move: float = 0.42
    ring_lift: float = 0.54
    semantic_base: float = 0.62
    semantic_step: float = 0.07
    max_arc_height: float = 0.35

    def __post_init__(self) -> None:
        if not 0.0 < self.ring_touch < self.ring_move < self.ring_lift:
            raise ValueError("ring radii must satisfy 0 < touch < move < lift")

    def semantic_radius(self, ring_index: int) -> float:
        return self.semantic_base + self.semantic_step * ring_index


@dataclass(frozen=True)
class Dot:
    gesture_id: int
    point_index: int
    action: Action
    ring: str  # "touch" | "move" | "lift"
    angle: float
    t: float
    x: float
    y: float


@dataclass(frozen=True)
class Arc:
    gesture_id: int
    start_angle: float
    end_angle: float
    height: float
    duration: float


@dataclass(frozen=True)
class SemanticRegion:
    """A self-defined circular screen area mapped to one outer semantic ring."""

    region_id: str
    label: str
    cx: float
    cy: float
    radius: float
    ring_index: int

    def contains(self, x: float, y: float) -> bool:
        return math.hypot(x - self.cx, y - self.cy) <= self.radius


@dataclass(frozen=True)
class SemanticDot:
    gesture_id: int
    region_id: str
    angle: float
    t: float


@dataclass(frozen=True)
class RadialLayout:
    start_t: float
    end_t: float
    ring_radii: dict[str, float]
    dots: tuple[Dot, ...]
    arcs: tuple[Arc, ...]
    semantic_rings: tuple[tuple[str, str, float], ...] = ()  # (region_id, label, radius)
    semantic_dots: tuple[SemanticDot, ...] = ()


_RING_BY_ACTION = {Action.DOWN: "touch", Action.MOVE: "move", Action.UP: "lift"}


def _session_period(session: Session) -> tuple[float, float]:
    times = [e.t for e in session.events] or [t for g in session.gestures for (_, _, t) in g.points]
    if not times:
        raise DegeneratePeriod("session has no events")
    start_t, end_t = min(times), max(times)
    if end_t <= start_t:
        raise DegeneratePeriod(f"session period is a single instant (t={start_t})")
    return start_t, end_t


def _angle_of(t: float, start_t: float, end_t: float) -> float:
    return TAU * (t - start_t) / (end_t - start_t)


def build_radial_layout(
    session: Session,
    config: LayoutConfig | None = None,
    regions: Sequence[SemanticRegion] = (),
) -> RadialLayout:
    """Place every gesture event on its action ring and build one arc per gesture.

    The dot angle is 2*pi*(t - start)/(end - start), clockwise from 12
    o'clock over the session period. Arc height is max_arc_height scaled by
    the gesture's share of the longest duration in the session. Orphan events
    (not part of any gesture) carry no analytic weight and get no dot.
    """
    config = config or LayoutConfig()
    start_t, end_t = _session_period(session)

    dots: list[Dot] = []
    arcs: list[Arc] = []
    max_duration = max((g.duration for g in session.gestures), default=0.0)

    for gesture in session.gestures:
        for index, (x, y, t) in enumerate(gesture.points):
            action = gesture.action_at(index)
            dots.append(
                Dot(
                    gesture_id=gesture.gesture_id,
                    point_index=index,
                    action=action,
                    ring=_RING_BY_ACTION[action],
                    angle=_angle_of(t, start_t, end_t),
                    t=t,
                    x=x,
                    y=y,
                )
            )
        height = config.max_arc_height * (gesture.duration / max_duration) if max_duration > 0 else 0.0
        arcs.append(
            Arc(
                gesture_id=gesture.gesture_id,
                start_angle=_angle_of(gesture.start_t, start_t, end_t),
                end_angle=_angle_of(gesture.end_t, start_t, end_t),
                height=height,
                duration=gesture.duration,
            )
        )

    semantic_rings: tuple[tuple[str, str, float], ...] = ()
    semantic_dots: tuple[SemanticDot, ...] = ()
    if regions:
        semantic_rings = tuple(
            (r.region_id, r.label, config.semantic_radius(r.ring_index)) for r in regions
        )
        semantic_dots = assign_semantic_axes(session, regions)

    return RadialLayout(
        start_t=start_t,
        end_t=end_t,
        ring_radii={"touch": config.ring_touch, "move": config.ring_move, "lift": config.ring_lift},
        dots=tuple(dots),
        arcs=tuple(arcs),
        semantic_rings=semantic_rings,
        semantic_dots=semantic_dots,
    )


def validate_regions(regions: Sequence[SemanticRegion]) -> None:
    """Reject overlapping circles and duplicate ids/rings."""
    seen_ids: set[str] = set()
    seen_rings: set[int] = set()
    for r in regions:
        if r.radius <= 0:
            raise ValueError(f"region {r.label!r} has non-positive radius")
        if r.region_id in seen_ids:
            raise ValueError(f"duplicate region id {r.region_id!r}")
        if r.ring_index in seen_rings:
            raise ValueError(f"duplicate semantic ring index {r.ring_index}")
        seen_ids.add(r.region_id)
        seen_rings.add(r.ring_index)
    for i, a in enumerate(regions):
        for b in regions[i + 1 :]:
            if math.hypot(a.cx - b.cx, a.cy - b.cy) < a.radius + b.radius:
                raise AmbiguousRegions(
                    f"regions {a.label!r} and {b.label!r} overlap",
                    pair=(a.region_id, b.region_id),
                )


def assign_semantic_axes(
    session: Session,
    regions: Sequence[SemanticRegion],
    include_moves: bool = False,
) -> tuple[SemanticDot, ...]:
    """Map triggering events inside each region onto that region's semantic ring.

    Only finger-down events count as triggers by default (a skill press is a
    tap); ``include_moves`` additionally maps move and lift events, for held
    buttons. Regions must be non-overlapping, so no event lands on two rings.
    """
    validate_regions(regions)
    start_t, end_t = _session_period(session)

    out: list[SemanticDot] = []
    for gesture in session.gestures:
        for index, (x, y, t) in enumerate(gesture.points):
            if gesture.action_at(index) is not Action.DOWN and not include_moves:
                continue
            for region in regions:
                if region.contains(x, y):
                    out.append(
                        SemanticDot(
                            gesture_id=gesture.gesture_id,
                            region_id=region.region_id,
                            angle=_angle_of(t, start_t, end_t),
                            t=t,
                        )
                    )
                    break
    return tuple(out)


# -- spatial queries ----------------------------------------------------------

@dataclass(frozen=True)
class CircleArea:
    cx: float
    cy: float
    radius: float

    def contains(self, x: float, y: float) -> bool:
        return math.hypot(x - self.cx, y - self.cy) <= self.radius


@dataclass(frozen=True)
class RectArea:
    x0: float
    y0: float
    x1: float
    y1: float

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1


@dataclass(frozen=True)
class QueryResult:
    gesture_ids: tuple[int, ...]
    events: tuple[tuple[int, int, float, float, float, str], ...]
    # (gesture_id, point_index, x, y, t, action)


def spatial_query(session: Session, area: CircleArea | RectArea, mode: str = "start_in") -> QueryResult:
    """Gestures linked to a screen area.

    mode "start_in" keeps gestures whose first point lies in the area;
    "any_in" keeps gestures with any point inside. The result carries every
    point of each matching gesture so callers can link ring dots to the full
    trajectory. An empty result is valid.
    """
    if mode not in ("start_in", "any_in"):
        raise ValueError(f"unknown query mode {mode!r}")

    matched: list[Gesture] = []
    for gesture in session.gestures:
        if mode == "start_in":
            x, y, _ = gesture.points[0]
            hit = area.contains(x, y)
        else:
            hit = any(area.contains(x, y) for x, y, _ in gesture.points)
        if hit:
            matched.append(gesture)

    events = tuple(
        (g.gesture_id, i, x, y, t, g.action_at(i).value)
        for g in matched
        for i, (x, y, t) in enumerate(g.points)
    )
    return QueryResult(gesture_ids=tuple(g.gesture_id for g in matched), events=events)


# -- heat map -----------------------------------------------------------------

@dataclass(frozen=True)
class HeatmapGrid:
    cols: int
    rows: int
    counts: tuple[tuple[int, ...], ...]  # rows x cols
    max_count: int
    total: int


def heatmap(
    session: Session,
    cols: int,
    rows: int,
    actions: Iterable[Action] | None = None,
    event_filter: Callable[..., bool] | None = None,
) -> HeatmapGrid:
    """Bin events uniformly over the screen into a cols x rows grid.

    Cell (i, j) covers the half-open range (i*w/cols, (i+1)*w/cols] so that a
    coordinate exactly on an interior boundary bins to the lower-index cell;
    0 falls in cell 0 and the right/bottom screen edge clamps to the last
    cell. ``actions`` restricts which event kinds are counted; an optional
    ``event_filter(event)`` predicate refines further.
    """
    if cols < 1 or rows < 1:
        raise ValueError(f"grid must be at least 1x1, got {cols}x{rows}")
    wanted = set(actions) if actions is not None else None
    width, height = session.device.width_px, session.device.height_px

    grid = [[0] * cols for _ in range(rows)]
    total = 0
    for event in session.events:
        if wanted is not None and event.action not in wanted:
            continue
        if event_filter is not None and not event_filter(event):
            continue
        col = min(max(math.ceil(event.x * cols / width) - 1, 0), cols - 1)
        row = min(max(math.ceil(event.y * rows / height) - 1, 0), rows - 1)
        grid[row][col] += 1
        total += 1

    counts = tuple(tuple(r) for r in grid)
    return HeatmapGrid(
        cols=cols,
        rows=rows,
        counts=counts,
        max_count=max((c for row in counts for c in row), default=0),
        total=total,
    )


# -- structured-data conversion -----------------------------------------------

def layout_to_dict(layout: RadialLayout) -> dict:
    return {
        "period": {"start_t": layout.start_t, "end_t": layout.end_t},
        "ring_radii": dict(layout.ring_radii),
        "dots": [
            {
                "gesture_id": d.gesture_id,
                "point_index": d.point_index,
                "action": d.action.value,
                "ring": d.ring,
                "angle": d.angle,
                "t": d.t,
                "x": d.x,
                "y": d.y,
            }
            for d in layout.dots
        ],
        "arcs": [
            {
                "gesture_id": a.gesture_id,
                "start_angle": a.start_angle,
                "end_angle": a.end_angle,
                "height": a.height,
                "duration": a.duration,
            }
            for a in layout.arcs
        ],
        "semantic_rings": [
            {"region_id": rid, "label": label, "radius": radius}
            for rid, label, radius in layout.semantic_rings
        ],
        "semantic_dots": [
            {"gesture_id": s.gesture_id, "region_id": s.region_id, "angle": s.angle, "t": s.t}
            for s in layout.semantic_dots
        ],
    }


def query_to_dict(result: QueryResult) -> dict:
    return {
        "gesture_ids": list(result.gesture_ids),
        "events": [
            {"gesture_id": gid, "point_index": idx, "x": x, "y": y, "t": t, "action": action}
            for gid, idx, x, y, t, action in result.events
        ],
    }


def heatmap_to_dict(grid: HeatmapGrid) -> dict:
    return {
        "cols": grid.cols,
        "rows": grid.rows,
        "counts": [list(row) for row in grid.counts],
        "max_count": grid.max_count,
        "total": grid.total,
    }
