"""Static SVG renderers for layouts, verification overlays, and cluster reports.

Output is byte-stable: coordinates are written with fixed precision and all
iteration orders are deterministic, so identical inputs produce identical
files (the golden-file contract for batch reports).
"""

from __future__ import annotations

import math

from .clustering import ClusterResult, ConfidenceRegion
from .ingest import DeviceProfile, Session
from .layout import RadialLayout, SemanticRegion
from .metrics import GestureVector

PALETTE = (
    "#e76f51", "#2a9d8f", "#e9c46a", "#264653", "#f4a261",
    "#7b2cbf", "#0096c7", "#d62828", "#588157", "#bc6c25",
    "#6a4c93", "#118ab2", "#ef476f", "#06d6a0", "#ffd166", "#8338ec",
)

RING_COLORS = {"touch": "#2a9d8f", "move": "#e9c46a", "lift": "#e76f51"}


def _f(value: float) -> str:
    return f"{value:.3f}"


class SvgCanvas:
    """Minimal element-list SVG writer."""

    def __init__(self, width: float, height: float, background: str | None = "white"):
        self.width = width
        self.height = height
        self._parts: list[str] = []
        if background:
            self.rect(0, 0, width, height, fill=background, stroke="none")

    def _attr(self, attrs: dict) -> str:
        return " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in attrs.items() if v is not None)

    def rect(self, x, y, w, h, **attrs) -> None:
        self._parts.append(
            f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" {self._attr(attrs)}/>'
        )

    def circle(self, cx, cy, r, **attrs) -> None:
        self._parts.append(f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" {self._attr(attrs)}/>')

    def line(self, x1, y1, x2, y2, **attrs) -> None:
        self._parts.append(
            f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" {self._attr(attrs)}/>'
        )

    def polyline(self, points, **attrs) -> None:
        coords = " ".join(f"{_f(x)},{_f(y)}" for x, y in points)
        self._parts.append(f'<polyline points="{coords}" {self._attr(attrs)}/>')

    def path(self, d: str, **attrs) -> None:
        self._parts.append(f'<path d="{d}" {self._attr(attrs)}/>')

    def text(self, x, y, content: str, **attrs) -> None:
        self._parts.append(f'<text x="{_f(x)}" y="{_f(y)}" {self._attr(attrs)}>{content}</text>')

    def to_string(self) -> str:
        header = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(self.width)}" '
            f'height="{_f(self.height)}" viewBox="0 0 {_f(self.width)} {_f(self.height)}">'
        )
        return "\n".join([header, *self._parts, "</svg>"]) + "\n"


def _polar(cx: float, cy: float, radius: float, angle: float) -> tuple[float, float]:
    """Angle measured clockwise from 12 o'clock, y axis pointing down."""
    return cx + radius * math.sin(angle), cy - radius * math.cos(angle)


def render_layout_svg(layout: RadialLayout, session: Session | None = None, size: float = 900.0) -> str:
    """Radial layout: action rings, event dots, duration arcs, semantic rings.

    When a session is given, its screen is drawn scaled-down in the center
    with the gesture trajectories as an underlay.
    """
    canvas = SvgCanvas(size, size)
    cx = cy = size / 2.0
    scale = 0.46 * size

    for name in ("touch", "move", "lift"):
        canvas.circle(cx, cy, layout.ring_radii[name] * scale, fill="none",
                      stroke="#cccccc", stroke_width=1.0)
        lx, ly = _polar(cx, cy, layout.ring_radii[name] * scale, 0.0)
        canvas.text(lx + 4, ly - 3, name, font_size="10", fill="#999999")
    for i, (_, label, radius) in enumerate(layout.semantic_rings):
        canvas.circle(cx, cy, radius * scale, fill="none", stroke=PALETTE[i % len(PALETTE)],
                      stroke_width=0.8, stroke_dasharray="3,3")
        lx, ly = _polar(cx, cy, radius * scale, 0.0)
        canvas.text(lx + 4, ly - 3, label, font_size="10", fill=PALETTE[i % len(PALETTE)])

    if session is not None:
        d = session.device
        inner = 0.9 * layout.ring_radii["touch"] * scale
        s = 2.0 * inner / d.diagonal_px
        ox, oy = cx - d.width_px * s / 2.0, cy - d.height_px * s / 2.0
        canvas.rect(ox, oy, d.width_px * s, d.height_px * s, fill="#f7f7f7", stroke="#bbbbbb",
                    stroke_width=0.8)
        for gesture in session.gestures:
            pts = [(ox + x * s, oy + y * s) for x, y, _ in gesture.points]
            color = PALETTE[gesture.gesture_id % len(PALETTE)]
            if len(pts) == 1:
                canvas.circle(pts[0][0], pts[0][1], 1.2, fill=color, stroke="none")
            else:
                canvas.polyline(pts, fill="none", stroke=color, stroke_width=0.8,
                                stroke_opacity="0.7")

    lift_r = layout.ring_radii["lift"]
    for arc in layout.arcs:
        x0, y0 = _polar(cx, cy, layout.ring_radii["touch"] * scale, arc.start_angle)
        x1, y1 = _polar(cx, cy, lift_r * scale, arc.end_angle)
        apex = (lift_r + arc.height) * scale
        a_third = arc.start_angle + (arc.end_angle - arc.start_angle) / 3.0
        b_third = arc.start_angle + 2.0 * (arc.end_angle - arc.start_angle) / 3.0
        c1 = _polar(cx, cy, apex, a_third)
        c2 = _polar(cx, cy, apex, b_third)
        color = PALETTE[arc.gesture_id % len(PALETTE)]
        canvas.path(
            f"M {_f(x0)} {_f(y0)} C {_f(c1[0])} {_f(c1[1])}, {_f(c2[0])} {_f(c2[1])}, {_f(x1)} {_f(y1)}",
            fill="none", stroke=color, stroke_width=1.2, stroke_opacity="0.8",
        )

    for dot in layout.dots:
        x, y = _polar(cx, cy, layout.ring_radii[dot.ring] * scale, dot.angle)
        canvas.circle(x, y, 2.2, fill=RING_COLORS[dot.ring], stroke="none", fill_opacity="0.8")

    ring_radius = {rid: radius for rid, _, radius in layout.semantic_rings}
    ring_color = {rid: PALETTE[i % len(PALETTE)] for i, (rid, _, _) in enumerate(layout.semantic_rings)}
    for sdot in layout.semantic_dots:
        x, y = _polar(cx, cy, ring_radius[sdot.region_id] * scale, sdot.angle)
        canvas.circle(x, y, 2.6, fill=ring_color[sdot.region_id], stroke="none")

    duration_s = (layout.end_t - layout.start_t) / 1000.0
    canvas.text(10, size - 10, f"period {duration_s:.1f} s, {len(layout.dots)} actions, "
                f"{len(layout.arcs)} gestures", font_size="11", fill="#555555")
    return canvas.to_string()


def render_verify_svg(
    device: DeviceProfile,
    entries: list[tuple[str, ConfidenceRegion]],
    regions: list[SemanticRegion] | None = None,
    width: float = 960.0,
) -> str:
    """Screen-space overlay of selections and fitted regions.

    Each entry is (row label, fitted region): the yellow circle is the
    selection, the red dot the original centroid, the green circle the
    adjusted region at its confidence coefficient.
    """
    s = width / device.width_px
    canvas = SvgCanvas(width, device.height_px * s)
    canvas.rect(0, 0, width, device.height_px * s, fill="none", stroke="#444444", stroke_width=1.0)

    for region in regions or []:
        canvas.circle(region.cx * s, region.cy * s, region.radius * s, fill="none",
                      stroke="#999999", stroke_width=0.8, stroke_dasharray="4,3")
        canvas.text(region.cx * s, (region.cy - region.radius) * s - 3, region.label,
                    font_size="10", fill="#777777", text_anchor="middle")

    for label, fit in entries:
        canvas.circle(fit.selection_center[0] * s, fit.selection_center[1] * s,
                      fit.selection_radius * s, fill="#ffd166", fill_opacity="0.15",
                      stroke="#e9c46a", stroke_width=1.0)
        canvas.circle(fit.new_center[0] * s, fit.new_center[1] * s, fit.new_radius * s,
                      fill="#06d6a0", fill_opacity="0.25", stroke="#2a9d8f", stroke_width=1.2)
        canvas.circle(fit.original_center[0] * s, fit.original_center[1] * s, 3.0,
                      fill="#d62828", stroke="none")
        canvas.circle(fit.new_center[0] * s, fit.new_center[1] * s, 3.0,
                      fill="#2a9d8f", stroke="none")
        canvas.text(fit.new_center[0] * s + 5, fit.new_center[1] * s - 5,
                    f"{label} c={fit.confidence:g} r={fit.new_radius:.1f}px",
                    font_size="10", fill="#333333")
    return canvas.to_string()


def render_cluster_svg(
    device: DeviceProfile,
    result: ClusterResult,
    vectors: list[GestureVector] | None = None,
    width: float = 960.0,
) -> str:
    """Per-cluster mean trajectories over the screen, members as faint underlays."""
    s = width / device.width_px
    canvas = SvgCanvas(width, device.height_px * s)
    canvas.rect(0, 0, width, device.height_px * s, fill="none", stroke="#444444", stroke_width=1.0)

    if vectors:
        for vector in vectors:
            cluster = result.assignment[vector.gesture_id]
            pts = [(x * s, y * s) for x, y in vector.pts]
            canvas.polyline(pts, fill="none", stroke=PALETTE[cluster % len(PALETTE)],
                            stroke_width=0.6, stroke_opacity="0.25")

    sizes = result.cluster_sizes()
    for cluster, centroid in enumerate(result.centroids):
        color = PALETTE[cluster % len(PALETTE)]
        pts = [(x * s, y * s) for x, y in centroid.pts]
        canvas.polyline(pts, fill="none", stroke=color, stroke_width=2.4)
        canvas.circle(pts[0][0], pts[0][1], 3.5, fill=color, stroke="white", stroke_width=1.0)
        canvas.text(pts[0][0] + 6, pts[0][1] - 6, f"c{cluster} (n={sizes[cluster]})",
                    font_size="11", fill=color)
    return canvas.to_string()
