from __future__ import annotations

import math

import numpy as np
import pytest

from touchtrail.errors import DimensionMismatch, InvalidSampleCount, ZeroNorm
from touchtrail.ingest import Action, Gesture
from touchtrail.metrics import (
    DistanceConfig,
    GestureVector,
    combined_distance,
    cosine_similarity,
    euclid_distance,
    path_length,
    resample,
    vector_from_record,
    vector_to_record,
)


def vec(*pts: tuple[float, float]) -> GestureVector:
    return GestureVector(gesture_id=0, pts=tuple(pts), source_length=path_length(pts))


def walk_resample(points: list[tuple[float, float]], n: int) -> list[tuple[float, float]]:
    """Independent oracle: incremental walk accumulating arc length (no binary search)."""
    total = sum(math.dist(points[i], points[i + 1]) for i in range(len(points) - 1))
    if total == 0:
        return [points[0]] * n
    out = [points[0]]
    spacing = total / (n - 1)
    covered = 0.0
    seg = 0
    pos = points[0]
    for _ in range(n - 2):
        target = covered + spacing
        while True:
            seg_end = points[seg + 1]
            step = math.dist(pos, seg_end)
            if covered + step >= target and step > 0:
                f = (target - covered) / step
                pos = (pos[0] + f * (seg_end[0] - pos[0]), pos[1] + f * (seg_end[1] - pos[1]))
                covered = target
                break
            covered += step
            pos = seg_end
            seg += 1
        out.append(pos)
    out.append(points[-1])
    return out


# -- path_length -----------------------------------------------------------------


def test_path_length_right_angle_legs():
    assert path_length([(0, 0), (3, 0), (3, 4)]) == pytest.approx(7.0)


def test_path_length_single_tap_is_zero():
    gesture = Gesture(gesture_id=0, pointer_id=0, points=((5.0, 5.0, 0.0),), force_closed=True)
    assert path_length(gesture) == 0.0


def test_path_length_matches_pairwise_oracle():
    rng = np.random.default_rng(3)
    pts = [(float(x), float(y)) for x, y in rng.uniform(0, 1000, size=(50, 2))]
    oracle = 0.0
    for i in range(49):
        dx, dy = pts[i + 1][0] - pts[i][0], pts[i + 1][1] - pts[i][1]
        oracle += (dx * dx + dy * dy) ** 0.5
    assert path_length(pts) == pytest.approx(oracle, abs=1e-9)


# -- resample --------------------------------------------------------------------


def test_resample_segment_midpoint():
    v = resample([(0.0, 0.0), (10.0, 0.0)], 3)
    assert v.pts == ((0.0, 0.0), (5.0, 0.0), (10.0, 0.0))


def test_resample_hits_vertex_exactly():
    v = resample([(0.0, 0.0), (3.0, 0.0), (3.0, 4.0)], 8)
    assert v.n_samples == 8
    assert v.source_length == pytest.approx(7.0)
    # spacing 1.0; the 4th sample (arc distance 3) is the corner vertex
    assert v.pts[3] == (3.0, 0.0)
    for i in range(7):
        gap = math.dist(v.pts[i], v.pts[i + 1])
        assert gap == pytest.approx(1.0, rel=1e-9)


def test_resample_already_uniform_is_fixed_point():
    pts = tuple((float(i), 0.0) for i in range(8))
    v = resample(list(pts), 8)
    assert v.pts == pts


def test_resample_tap_replicates_point():
    v = resample([(7.0, 9.0)], 5)
    assert v.pts == ((7.0, 9.0),) * 5
    assert v.source_length == 0.0


def test_resample_rejects_small_n():
    with pytest.raises(InvalidSampleCount):
        resample([(0.0, 0.0), (1.0, 1.0)], 1)


def test_resample_endpoints_and_spacing_random_polylines():
    rng = np.random.default_rng(11)
    for _ in range(50):
        m = int(rng.integers(2, 15))
        pts = [(float(x), float(y)) for x, y in rng.uniform(0, 1920, size=(m, 2))]
        for n in (2, 8, 32):
            v = resample(pts, n)
            assert v.pts[0] == pts[0]
            assert v.pts[-1] == pts[-1]
            oracle = walk_resample(pts, n)
            for got, want in zip(v.pts, oracle):
                assert math.dist(got, want) < 1e-6


# -- euclid ----------------------------------------------------------------------


def test_euclid_identity():
    v = vec((0, 0), (1, 0))
    assert euclid_distance(v, v) == 0.0


def test_euclid_unit_offset():
    v = vec((0.0, 0.0), (1.0, 0.0))
    w = vec((0.0, 1.0), (1.0, 1.0))
    assert euclid_distance(v, w) == pytest.approx(math.sqrt(2))


def test_euclid_symmetric_on_random_pairs():
    rng = np.random.default_rng(5)
    for _ in range(100):
        a = vec(*[tuple(p) for p in rng.uniform(0, 100, size=(4, 2))])
        b = vec(*[tuple(p) for p in rng.uniform(0, 100, size=(4, 2))])
        assert euclid_distance(a, b) == euclid_distance(b, a)


def test_euclid_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        euclid_distance(vec((0, 0), (1, 1)), vec((0, 0), (1, 1), (2, 2)))


# -- cosine ----------------------------------------------------------------------


def test_cosine_parallel_is_one():
    v = vec((1.0, 2.0), (3.0, 4.0))
    assert cosine_similarity(v, v) == 1.0


def test_cosine_antiparallel_is_minus_one():
    v = vec((1.0, 2.0), (3.0, 4.0))
    w = vec((-1.0, -2.0), (-3.0, -4.0))
    assert cosine_similarity(v, w) == -1.0


def test_cosine_orthogonal_flattened_vectors():
    v = vec((1.0, 0.0), (1.0, 0.0))
    w = vec((0.0, 1.0), (0.0, 1.0))
    assert cosine_similarity(v, w) == pytest.approx(0.0)


def test_cosine_zero_norm_raises():
    z = vec((0.0, 0.0), (0.0, 0.0))
    with pytest.raises(ZeroNorm):
        cosine_similarity(z, vec((1.0, 0.0), (2.0, 0.0)))


def test_cosine_bounded_and_scale_invariant():
    rng = np.random.default_rng(17)
    for _ in range(200):
        a = vec(*[tuple(p) for p in rng.uniform(-50, 50, size=(6, 2))])
        b = vec(*[tuple(p) for p in rng.uniform(-50, 50, size=(6, 2))])
        c = cosine_similarity(a, b)
        assert -1.0 <= c <= 1.0
        scale = float(rng.uniform(0.1, 10.0))
        scaled = vec(*[(scale * x, scale * y) for x, y in a.pts])
        assert cosine_similarity(scaled, b) == pytest.approx(c, abs=1e-9)


def test_cosine_centered_ignores_translation():
    a = vec((0.0, 0.0), (10.0, 0.0), (10.0, 10.0))
    shifted = vec(*[(x + 500.0, y + 300.0) for x, y in a.pts])
    assert cosine_similarity(a, shifted, center=True) == pytest.approx(1.0)


# -- combined --------------------------------------------------------------------


def test_combined_identity_any_weight():
    v = vec((3.0, 1.0), (5.0, 2.0))
    for w_e in (0.0, 0.3, 0.5, 1.0):
        cfg = DistanceConfig(weight_euclid=w_e)
        assert combined_distance(v, v, cfg) == 0.0


def test_combined_pure_euclid_weight():
    v = vec((0.0, 0.0), (1.0, 0.0))
    w = vec((0.0, 1.0), (1.0, 1.0))
    cfg = DistanceConfig(weight_euclid=1.0, euclid_normalizer=100.0)
    assert combined_distance(v, w, cfg) == pytest.approx(math.sqrt(2) / 100.0)


def test_combined_pure_cosine_antiparallel():
    v = vec((1.0, 2.0), (3.0, 4.0))
    w = vec((-1.0, -2.0), (-3.0, -4.0))
    cfg = DistanceConfig(weight_euclid=0.0)
    assert combined_distance(v, w, cfg) == 1.0


def test_combined_pure_euclid_tolerates_zero_vectors():
    z = vec((0.0, 0.0), (0.0, 0.0))
    v = vec((3.0, 4.0), (3.0, 4.0))
    cfg = DistanceConfig(weight_euclid=1.0, euclid_normalizer=1.0)
    assert combined_distance(z, v, cfg) == pytest.approx(math.hypot(3, 4) * math.sqrt(2))


def test_combined_symmetric_nonnegative_random():
    rng = np.random.default_rng(23)
    for _ in range(100):
        a = vec(*[tuple(p) for p in rng.uniform(0, 1000, size=(4, 2))])
        b = vec(*[tuple(p) for p in rng.uniform(0, 1000, size=(4, 2))])
        w_e = float(rng.uniform(0, 1))
        cfg = DistanceConfig(weight_euclid=w_e)
        d_ab = combined_distance(a, b, cfg)
        assert d_ab >= 0.0
        assert d_ab == pytest.approx(combined_distance(b, a, cfg), abs=1e-12)


def test_distance_config_validation():
    with pytest.raises(ValueError):
        DistanceConfig(weight_euclid=1.5)
    with pytest.raises(InvalidSampleCount):
        DistanceConfig(n_samples=1)
    with pytest.raises(ValueError):
        DistanceConfig(euclid_normalizer=0.0)


# -- serialization ----------------------------------------------------------------


def test_vector_record_roundtrip():
    v = resample([(0.0, 0.0), (3.0, 0.0), (3.0, 4.0)], 8)
    record = vector_to_record(v)
    assert record.startswith("-1,8,")
    w = vector_from_record(record)
    assert w.pts == v.pts
    assert w.gesture_id == v.gesture_id
