"""Analytics engine for multi-touch interaction logs from joystick-based game apps."""

from .clustering import (
    ClusterResult,
    ConfidenceRegion,
    KMeansConfig,
    UiMetrics,
    confidence_region,
    kmeans,
    region_metrics,
)
from .errors import TouchtrailError
from .ingest import (
    Action,
    DeviceProfile,
    Gesture,
    Orientation,
    STUDY_DEVICE,
    Session,
    TouchEvent,
    mm_to_px,
    parse_log,
    px_to_mm,
    segment_gestures,
    serialize_session,
)
from .layout import (
    CircleArea,
    HeatmapGrid,
    LayoutConfig,
    RadialLayout,
    RectArea,
    SemanticRegion,
    assign_semantic_axes,
    build_radial_layout,
    heatmap,
    spatial_query,
)
from .metrics import (
    DistanceConfig,
    GestureVector,
    combined_distance,
    cosine_similarity,
    euclid_distance,
    path_length,
    resample,
)

__version__ = "0.1.0"

__all__ = [
    "Action",
    "CircleArea",
    "ClusterResult",
    "ConfidenceRegion",
    "DeviceProfile",
    "DistanceConfig",
    "Gesture",
    "GestureVector",
    "HeatmapGrid",
    "KMeansConfig",
    "LayoutConfig",
    "Orientation",
    "RadialLayout",
    "RectArea",
    "STUDY_DEVICE",
    "SemanticRegion",
    "Session",
    "TouchEvent",
    "TouchtrailError",
    "UiMetrics",
    "assign_semantic_axes",
    "build_radial_layout",
    "combined_distance",
    "confidence_region",
    "cosine_similarity",
    "euclid_distance",
    "heatmap",
    "kmeans",
    "mm_to_px",
    "parse_log",
    "path_length",
    "px_to_mm",
    "region_metrics",
    "resample",
    "segment_gestures",
    "serialize_session",
    "spatial_query",
    "__version__",
]
