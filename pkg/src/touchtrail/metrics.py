"""Fixed-length gesture resampling and the distance functions built on it.

A gesture trajectory with M recorded points is resampled to N points that are
evenly spaced along the polyline (linear interpolation between recorded
points, endpoints preserved exactly). Distances between two resampled
gestures combine an absolute term (Euclidean distance between the flattened
coordinate vectors, normalized by the screen diagonal) and a directional term
(cosine similarity of the flattened vectors, mapped onto [0, 1] as a
distance) with an adjustable weight.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidSampleCount, ZeroNorm
from .ingest import Gesture, STUDY_DEVICE

DEFAULT_SAMPLE_COUNT = 32


@dataclass(frozen=True)
class GestureVector:
    """Fixed-length resampled representation of one gesture."""

    gesture_id: int
    pts: tuple[tuple[float, float], ...]
    source_length: float  # arc length of the original polyline, px

    def __post_init__(self) -> None:
        if len(self.pts) < 2:
            raise ValueError("gesture vector needs at least 2 samples")

    @property
    def n_samples(self) -> int:
        return len(self.pts)

    def flat(self) -> np.ndarray:
        """Coordinates flattened to a 2N vector (x0, y0, x1, y1, ...)."""
        return np.asarray(self.pts, dtype=float).reshape(-1)


@dataclass(frozen=True)
class DistanceConfig:
    """Weights and scale constants for the combined gesture distance.

    weight_euclid is the share of the absolute-position term; the directional
    (cosine) term gets 1 - weight_euclid. euclid_normalizer should be the
    screen diagonal in px so both terms live on a comparable [0, ~1] scale.
    center_before_cosine subtracts each gesture's centroid before the cosine
    term, making it shape-only; off by default.
    """

    weight_euclid: float = 0.5
    n_samples: int = DEFAULT_SAMPLE_COUNT
    euclid_normalizer: float = STUDY_DEVICE.diagonal_px
    center_before_cosine: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.weight_euclid <= 1.0:
            raise ValueError(f"weight_euclid must be in [0, 1], got {self.weight_euclid}")
        if self.n_samples < 2:
            raise InvalidSampleCount(f"n_samples must be >= 2, got {self.n_samples}")
        if not (math.isfinite(self.euclid_normalizer) and self.euclid_normalizer > 0):
            raise ValueError("euclid_normalizer must be a positive finite px length")


def _as_xy(gesture: Gesture | Sequence) -> list[tuple[float, float]]:
    points = gesture.points if isinstance(gesture, Gesture) else gesture
    return [(float(p[0]), float(p[1])) for p in points]


def path_length(gesture: Gesture | Sequence) -> float:
    """Arc length of the gesture polyline in px; 0 for single-point taps."""
    pts = _as_xy(gesture)
    return sum(
        math.hypot(pts[i + 1][0] - pts[i][0], pts[i + 1][1] - pts[i][1])
        for i in range(len(pts) - 1)
    )


def resample(gesture: Gesture | Sequence, n_samples: int = DEFAULT_SAMPLE_COUNT) -> GestureVector:
    """Resample a gesture to n_samples points evenly spaced along its path.

    The first and last samples equal the source endpoints exactly; interior
    samples sit at arc distances i * L / (n_samples - 1) and are linearly
    interpolated, except that exact hits on a source vertex return the vertex.
    A zero-length gesture (tap) yields n_samples copies of its single point.
    """
    if n_samples < 2:
        raise InvalidSampleCount(f"need at least 2 samples, got {n_samples}")
    pts = _as_xy(gesture)
    if not pts:
        raise ValueError("cannot resample an empty gesture")
    gesture_id = gesture.gesture_id if isinstance(gesture, Gesture) else -1

    seg_lengths = [
        math.hypot(pts[i + 1][0] - pts[i][0], pts[i + 1][1] - pts[i][1])
        for i in range(len(pts) - 1)
    ]
    cumulative = [0.0]
    for length in seg_lengths:
        cumulative.append(cumulative[-1] + length)
    total = cumulative[-1]

    if total == 0.0:
        return GestureVector(gesture_id=gesture_id, pts=tuple([pts[0]] * n_samples), source_length=0.0)

    out: list[tuple[float, float]] = [pts[0]]
    for i in range(1, n_samples - 1):
        target = i * total / (n_samples - 1)
        j = bisect.bisect_right(cumulative, target) - 1
        j = min(j, len(seg_lengths) - 1)
        if cumulative[j] == target:
            out.append(pts[j])
            continue
        frac = (target - cumulative[j]) / seg_lengths[j]
        ax, ay = pts[j]
        bx, by = pts[j + 1]
        out.append((ax + frac * (bx - ax), ay + frac * (by - ay)))
    out.append(pts[-1])
    return GestureVector(gesture_id=gesture_id, pts=tuple(out), source_length=total)


def _check_same_n(v: GestureVector, w: GestureVector) -> None:
    if v.n_samples != w.n_samples:
        raise DimensionMismatch(f"sample counts differ: {v.n_samples} vs {w.n_samples}")


def euclid_distance(v: GestureVector, w: GestureVector) -> float:
    """Euclidean distance between the flattened coordinate vectors."""
    _check_same_n(v, w)
    diff = v.flat() - w.flat()
    return float(np.sqrt(np.dot(diff, diff)))


def cosine_similarity(v: GestureVector, w: GestureVector, center: bool = False) -> float:
    """Cosine of the angle between the flattened 2N coordinate vectors, in [-1, 1].

    Computed on raw coordinates by default; ``center`` subtracts each
    gesture's mean point first for a shape-only comparison.
    """
    _check_same_n(v, w)
    if center:
        pa = np.asarray(v.pts, dtype=float)
        pb = np.asarray(w.pts, dtype=float)
        a = (pa - pa.mean(axis=0)).reshape(-1)
        b = (pb - pb.mean(axis=0)).reshape(-1)
    else:
        a, b = v.flat(), w.flat()
    norm_a = float(np.sqrt(np.dot(a, a)))
    norm_b = float(np.sqrt(np.dot(b, b)))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroNorm("cosine similarity undefined for a zero-norm gesture vector")
    # Exact identities for parallel and antiparallel inputs; float rounding in
    # sqrt would otherwise land a hair off +/-1.
    if np.array_equal(a, b):
        return 1.0
    if np.array_equal(a, -b):
        return -1.0
    value = float(np.dot(a, b) / (norm_a * norm_b))
    return max(-1.0, min(1.0, value))


def combined_distance(v: GestureVector, w: GestureVector, config: DistanceConfig) -> float:
    """Weighted blend of normalized Euclidean distance and cosine-derived distance.

    weight_euclid * d_euclid / euclid_normalizer
        + (1 - weight_euclid) * (1 - cos) / 2

    Zero iff v equals w, except at weight_euclid = 0 where the cosine term is
    blind to uniform scaling. With weight_euclid = 1 the cosine term is not
    evaluated at all, so zero-norm vectors stay usable in pure-position mode.
    """
    w_e = config.weight_euclid
    total = 0.0
    if w_e > 0.0:
        total += w_e * euclid_distance(v, w) / config.euclid_normalizer
    if w_e < 1.0:
        cos = cosine_similarity(v, w, center=config.center_before_cosine)
        total += (1.0 - w_e) * (1.0 - cos) / 2.0
    return total


# -- serialization ------------------------------------------------------------

def vector_to_record(v: GestureVector) -> str:
    """Flat text record: gesture_id,N,x0,y0,...,x{N-1},y{N-1}."""
    coords = ",".join(f"{c!r}" for p in v.pts for c in p)
    return f"{v.gesture_id},{v.n_samples},{coords}"


def vector_from_record(record: str) -> GestureVector:
    fields = record.strip().split(",")
    gesture_id, n = int(fields[0]), int(fields[1])
    values = [float(f) for f in fields[2:]]
    if len(values) != 2 * n:
        raise ValueError(f"expected {2 * n} coordinates, got {len(values)}")
    pts = tuple((values[2 * i], values[2 * i + 1]) for i in range(n))
    # The record does not carry the original arc length; fall back to the
    # sampled polyline's own length.
    return GestureVector(gesture_id=gesture_id, pts=pts, source_length=path_length(pts))
