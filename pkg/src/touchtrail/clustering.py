"""K-Means over gesture vectors and confidence-coefficient region fitting.

The clustering assigns vectors with the combined position/direction distance
and updates centroids toward coordinate means, guarded so the total inertia
(sum of member distances to their own centroid) never increases from one
iteration to the next.

Region fitting covers a selected set of interaction dots: take the dots
inside a selection circle, trim to the floor(c * n) dots closest to their
centroid, recenter on the trimmed set, re-rank the full selection against the
new center, and report the covering radius of the re-retained dots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptySelection,
    InvalidConfidence,
    OutOfBounds,
    TooFewPoints,
    ZeroNorm,
)
from .ingest import DeviceProfile, px_to_mm
from .metrics import DistanceConfig, GestureVector, path_length

_INERTIA_SLACK = 1e-9  # float summation regrouping tolerance for the monotonicity check


@dataclass(frozen=True)
class KMeansConfig:
    max_iterations: int = 100
    seed: int = 0
    distance: DistanceConfig = field(default_factory=DistanceConfig)


@dataclass(frozen=True)
class ClusterResult:
    k: int
    assignment: dict[int, int]  # gesture_id -> cluster index
    centroids: tuple[GestureVector, ...]
    inertia: float
    iterations: int
    seed: int
    inertia_history: tuple[float, ...] = ()

    def cluster_sizes(self) -> list[int]:
        sizes = [0] * self.k
        for cluster in self.assignment.values():
            sizes[cluster] += 1
        return sizes


def _stack(vectors: list[GestureVector]) -> np.ndarray:
    n = vectors[0].n_samples
    for v in vectors:
        if v.n_samples != n:
            raise DimensionMismatch(f"sample counts differ: {v.n_samples} vs {n}")
    return np.array([v.flat() for v in vectors], dtype=float)


def _distance_matrix(data: np.ndarray, centroids: np.ndarray, config: DistanceConfig) -> np.ndarray:
    """Combined distances between every row of data and every centroid, (n, k)."""
    w_e = config.weight_euclid
    out = np.zeros((data.shape[0], centroids.shape[0]))
    if w_e > 0.0:
        diff = data[:, None, :] - centroids[None, :, :]
        out += w_e * np.sqrt((diff * diff).sum(axis=2)) / config.euclid_normalizer
    if w_e < 1.0:
        norms_d = np.sqrt((data * data).sum(axis=1))
        norms_c = np.sqrt((centroids * centroids).sum(axis=1))
        if np.any(norms_d == 0.0) or np.any(norms_c == 0.0):
            raise ZeroNorm("cosine term undefined for a zero-norm vector")
        cos = (data @ centroids.T) / (norms_d[:, None] * norms_c[None, :])
        np.clip(cos, -1.0, 1.0, out=cos)
        out += (1.0 - w_e) * (1.0 - cos) / 2.0
    return out


def _member_cost(data: np.ndarray, centroid: np.ndarray, config: DistanceConfig) -> float:
    return float(_distance_matrix(data, centroid[None, :], config).sum())


def kmeans(vectors: list[GestureVector], k: int, config: KMeansConfig | None = None) -> ClusterResult:
    """Lloyd-style K-Means under the combined gesture distance.

    Deterministic for a fixed seed: the first centroid is a seeded RNG pick,
    the rest follow farthest-first. Each iteration reassigns to the nearest
    centroid, then moves each centroid to its members' coordinate mean only if
    that lowers the cluster's cost (the mean is not the exact minimizer of the
    mixed metric, and an unguarded move could raise it). Clusters left empty
    are reseeded with the point currently farthest from its own centroid.
    Stops at an assignment fixpoint or after max_iterations.
    """
    config = config or KMeansConfig()
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if config.max_iterations < 1:
        raise ValueError(f"max_iterations must be >= 1, got {config.max_iterations}")
    if k > len(vectors):
        raise TooFewPoints(f"{len(vectors)} vectors cannot fill {k} clusters")

    data = _stack(vectors)
    n = data.shape[0]
    dist_cfg = config.distance

    # Farthest-first seeding from a seeded random initial pick.
    rng = np.random.default_rng(config.seed)
    chosen = [int(rng.integers(n))]
    while len(chosen) < k:
        d = _distance_matrix(data, data[chosen], dist_cfg).min(axis=1)
        d[chosen] = -1.0
        chosen.append(int(np.argmax(d)))
    centroids = data[chosen].copy()

    assignment = np.full(n, -1, dtype=int)
    history: list[float] = []
    iterations = 0

    for _ in range(config.max_iterations):
        iterations += 1
        distances = _distance_matrix(data, centroids, dist_cfg)
        new_assignment = distances.argmin(axis=1)

        # Reseed empty clusters with the worst-fit point (never a sole member).
        for cluster in np.flatnonzero(np.bincount(new_assignment, minlength=k) == 0):
            sizes = np.bincount(new_assignment, minlength=k)
            member_dist = distances[np.arange(n), new_assignment].copy()
            member_dist[sizes[new_assignment] == 1] = -np.inf
            worst = int(np.argmax(member_dist))
            centroids[cluster] = data[worst]
            new_assignment[worst] = cluster
            distances = _distance_matrix(data, centroids, dist_cfg)

        if np.array_equal(new_assignment, assignment):
            break  # assignment fixpoint; keep the centroids this assignment is optimal for
        assignment = new_assignment

        for cluster in range(k):
            members = data[assignment == cluster]
            if members.shape[0] == 0:
                continue
            candidate = members.mean(axis=0)
            try:
                improved = _member_cost(members, candidate, dist_cfg) <= _member_cost(
                    members, centroids[cluster], dist_cfg
                )
            except ZeroNorm:
                improved = False  # zero-norm mean cannot be scored; keep the old centroid
            if improved:
                centroids[cluster] = candidate

        inertia = float(
            _distance_matrix(data, centroids, dist_cfg)[np.arange(n), assignment].sum()
        )
        if history and inertia > history[-1] + _INERTIA_SLACK * max(1.0, history[-1]):
            raise AssertionError(
                f"inertia increased: {history[-1]} -> {inertia} at iteration {iterations}"
            )
        history.append(inertia)

    n_samples = vectors[0].n_samples
    centroid_vectors = tuple(
        GestureVector(
            gesture_id=i,
            pts=tuple((float(x), float(y)) for x, y in centroids[i].reshape(-1, 2)),
            source_length=path_length(centroids[i].reshape(-1, 2)),
        )
        for i in range(k)
    )
    return ClusterResult(
        k=k,
        assignment={v.gesture_id: int(assignment[i]) for i, v in enumerate(vectors)},
        centroids=centroid_vectors,
        inertia=history[-1],
        iterations=iterations,
        seed=config.seed,
        inertia_history=tuple(history),
    )


# -- confidence regions -------------------------------------------------------

@dataclass(frozen=True)
class ConfidenceRegion:
    """Circle fitted around a selection so it covers floor(c * n) of its dots."""

    selection_center: tuple[float, float]
    selection_radius: float
    confidence: float
    original_center: tuple[float, float]
    original_count: int
    new_center: tuple[float, float]
    new_radius: float
    new_count: int


def confidence_region(
    points,
    selection_center: tuple[float, float],
    selection_radius: float,
    confidence: float,
) -> ConfidenceRegion:
    """Fit a covering circle for the dots inside a selection at a confidence coefficient.

    S is the set of dots within selection_radius of selection_center. The
    original center is the centroid of S. The floor(confidence * |S|) dots of
    S closest to it (stable input order on ties) are retained and their
    centroid becomes the new center; all of S is then re-ranked against the
    new center, the closest floor(confidence * |S|) dots are re-retained, and
    the new radius is the largest distance among them.
    """
    if not 0.0 < confidence <= 1.0:
        raise InvalidConfidence(f"confidence coefficient must be in (0, 1], got {confidence}")
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    center = np.asarray(selection_center, dtype=float)

    inside = np.linalg.norm(pts - center, axis=1) <= selection_radius
    selected = pts[inside]
    n_selected = selected.shape[0]
    if n_selected == 0:
        raise EmptySelection("no points inside the selection circle")

    retain = math.floor(confidence * n_selected)
    original_center = selected.mean(axis=0)

    if retain == 0:
        # Nothing to cover; degenerate but keeps the count law exact.
        new_center, new_radius = original_center, 0.0
    else:
        d0 = np.linalg.norm(selected - original_center, axis=1)
        kept = np.argsort(d0, kind="stable")[:retain]
        new_center = selected[kept].mean(axis=0)
        d1 = np.linalg.norm(selected - new_center, axis=1)
        rekept = np.argsort(d1, kind="stable")[:retain]
        new_radius = float(d1[rekept].max())

    return ConfidenceRegion(
        selection_center=(float(center[0]), float(center[1])),
        selection_radius=float(selection_radius),
        confidence=float(confidence),
        original_center=(float(original_center[0]), float(original_center[1])),
        original_count=int(n_selected),
        new_center=(float(new_center[0]), float(new_center[1])),
        new_radius=float(new_radius),
        new_count=int(retain),
    )


@dataclass(frozen=True)
class UiMetrics:
    """Physical-unit placement of a fitted region for UI verification."""

    distance_to_left: float  # mm; distance to the right edge when mirrored
    distance_to_bottom: float
    diameter: float
    mirrored: bool = False


def region_metrics(region: ConfidenceRegion, device: DeviceProfile, mirrored: bool = False) -> UiMetrics:
    """Edge distances and diameter of a fitted region in millimeters.

    ``mirrored`` reports the horizontal distance to the right screen edge
    instead of the left, for regions on the right half (skill buttons).
    """
    x, y = region.new_center
    if not (0.0 <= x <= device.width_px and 0.0 <= y <= device.height_px):
        raise OutOfBounds(f"region center ({x}, {y}) outside {device.width_px}x{device.height_px} screen")
    horizontal = device.width_px - x if mirrored else x
    return UiMetrics(
        distance_to_left=px_to_mm(horizontal, device, axis="width"),
        distance_to_bottom=px_to_mm(device.height_px - y, device, axis="height"),
        diameter=px_to_mm(2.0 * region.new_radius, device),
        mirrored=mirrored,
    )


# -- report serialization -----------------------------------------------------

REPORT_COLUMNS = (
    "label",
    "original radius",
    "sampling number",
    "original center",
    "original number",
    "new center",
    "new radius",
    "new number",
    "distance to edge",
    "distance to the bottom",
    "diameter",
)


def region_report_row(
    label: str,
    region: ConfidenceRegion,
    metrics: UiMetrics | None,
    sampling_number: int,
) -> list[str]:
    """One report row in the fixed column order; metrics may be absent (flagged rows)."""
    edge = "right" if metrics is not None and metrics.mirrored else "left"
    return [
        label,
        f"{region.selection_radius:.3f}",
        str(sampling_number),
        f"({region.original_center[0]:.3f}, {region.original_center[1]:.3f})",
        str(region.original_count),
        f"({region.new_center[0]:.3f}, {region.new_center[1]:.3f})",
        f"{region.new_radius:.3f}",
        str(region.new_count),
        f"{metrics.distance_to_left:.2f} mm ({edge})" if metrics else "-",
        f"{metrics.distance_to_bottom:.2f} mm" if metrics else "-",
        f"{metrics.diameter:.2f} mm" if metrics else "-",
    ]


def format_report(rows: list[list[str]], title: str) -> str:
    """Fixed-width text table; byte-stable for identical inputs."""
    table = [list(REPORT_COLUMNS)] + rows
    widths = [max(len(row[i]) for row in table) for i in range(len(REPORT_COLUMNS))]
    lines = [title]
    for row in table:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"
