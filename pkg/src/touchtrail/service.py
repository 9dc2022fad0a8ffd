"""HTTP facade over the analytics engine.

The service adds no math of its own: every endpoint parses parameters, calls
the corresponding library operation, and serializes the result. Derived
results are cached on disk keyed by (log hash, parameter hash), so repeated
identical requests return byte-identical bodies.

Endpoints::

    POST /sessions?session_id=ID        upload a raw log (text body) -> 201
    GET  /sessions                      list stored session ids
    GET  /sessions/{id}                 parse/segment summary
    GET  /sessions/{id}/layout          radial layout (ring config as query params)
    POST /sessions/{id}/query           spatial query {area, mode}
    GET  /sessions/{id}/regions         current semantic regions
    POST /sessions/{id}/regions         define semantic regions (replaces the set)
    POST /sessions/{id}/confidence-region  fit a region {cx, cy, radius, confidence, actions}
    POST /sessions/{id}/cluster         k-means over resampled gestures
    GET  /sessions/{id}/heatmap         binned event counts

Errors map to 4xx with machine-readable reason codes mirroring the library
error names, e.g. {"error": "InvalidConfidence", "message": "..."}.
"""

from __future__ import annotations

import json
from typing import Literal

from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import layout as layout_mod
from .clustering import KMeansConfig, confidence_region, kmeans, region_metrics
from .errors import DuplicateSession, SessionNotFound, TouchtrailError
from .ingest import Action, parse_log, validation_report
from .metrics import DistanceConfig, path_length, resample
from .store import SessionStore

_STATUS = {SessionNotFound: 404, DuplicateSession: 409}


def _json_bytes(payload: dict) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


class AreaModel(BaseModel):
    kind: Literal["circle", "rect"]
    cx: float | None = None
    cy: float | None = None
    radius: float | None = None
    x0: float | None = None
    y0: float | None = None
    x1: float | None = None
    y1: float | None = None

    def to_area(self):
        if self.kind == "circle":
            if None in (self.cx, self.cy, self.radius):
                raise ValueError("circle area needs cx, cy, radius")
            return layout_mod.CircleArea(cx=self.cx, cy=self.cy, radius=self.radius)
        if None in (self.x0, self.y0, self.x1, self.y1):
            raise ValueError("rect area needs x0, y0, x1, y1")
        return layout_mod.RectArea(x0=self.x0, y0=self.y0, x1=self.x1, y1=self.y1)


class QueryRequest(BaseModel):
    area: AreaModel
    mode: Literal["start_in", "any_in"] = "start_in"


class RegionModel(BaseModel):
    region_id: str
    label: str
    ring: int
    cx: float
    cy: float
    radius: float


class ConfidenceRequest(BaseModel):
    cx: float
    cy: float
    radius: float
    confidence: float
    actions: list[Literal["D", "M", "U"]] = Field(default_factory=lambda: ["D"])
    edge: Literal["left", "right", "auto"] = "auto"


class ClusterRequest(BaseModel):
    k: int
    n_samples: int = 32
    weight_euclid: float = 0.5
    seed: int = 0
    min_length_px: float = 0.0
    max_iterations: int = 100


def _parse_actions(raw: str | None) -> list[Action] | None:
    if raw is None or raw == "":
        return None
    return [Action(token) for token in raw.split(",")]


def _region_objects(stored: list[dict]) -> list[layout_mod.SemanticRegion]:
    return [
        layout_mod.SemanticRegion(
            region_id=r["region_id"], label=r["label"], cx=r["cx"], cy=r["cy"],
            radius=r["radius"], ring_index=r["ring"],
        )
        for r in stored
    ]


def create_app(store_root: str, default_n_samples: int = 32) -> FastAPI:
    store = SessionStore(store_root)
    app = FastAPI(title="touchtrail", version="0.1.0")
    app.state.store = store

    @app.exception_handler(TouchtrailError)
    async def _touchtrail_error(_req: Request, exc: TouchtrailError):
        status = _STATUS.get(type(exc), 400)
        return JSONResponse(status_code=status, content={"error": exc.name, "message": str(exc)})

    @app.exception_handler(ValueError)
    async def _value_error(_req: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"error": "ValueError", "message": str(exc)})

    @app.exception_handler(OSError)
    async def _os_error(_req: Request, exc: OSError):
        return JSONResponse(status_code=500, content={"error": "StoreIOError", "message": str(exc)})

    def _cached(session_id: str, op: str, params: dict, compute, extra: str = "") -> Response:
        payload = store.cache_get(session_id, op, params, extra)
        if payload is None:
            payload = _json_bytes(compute())
            store.cache_put(session_id, op, params, payload, extra)
        return Response(content=payload, media_type="application/json")

    # -- sessions ---------------------------------------------------------

    @app.post("/sessions", status_code=201)
    async def upload_session(request: Request, session_id: str = Query(...)):
        body = (await request.body()).decode("utf-8")
        session = parse_log(body, session_id=session_id)  # validates before storing
        store.upload(session_id, body)
        return {
            "session_id": session_id,
            "events": len(session.events),
            "rejected": len(session.rejected),
        }

    @app.get("/sessions")
    def list_sessions():
        return {"sessions": store.session_ids()}

    @app.get("/sessions/{session_id}")
    def session_summary(session_id: str):
        session = store.load_session(session_id)
        return {
            "session_id": session_id,
            "events": len(session.events),
            "gestures": len(session.gestures),
            "orphans": len(session.orphans),
            "rejected": len(session.rejected),
            "duration_ms": session.duration,
            "device": {
                "width_px": session.device.width_px,
                "height_px": session.device.height_px,
                "width_mm": session.device.width_mm,
                "height_mm": session.device.height_mm,
            },
            "validation": validation_report(session),
        }

    # -- layout -------------------------------------------------------------

    @app.get("/sessions/{session_id}/layout")
    def get_layout(
        session_id: str,
        ring_touch: float = 0.30,
        ring_move: float = 0.42,
        ring_lift: float = 0.54,
        semantic_base: float = 0.62,
        semantic_step: float = 0.07,
        max_arc_height: float = 0.35,
    ):
        params = {
            "ring_touch": ring_touch, "ring_move": ring_move, "ring_lift": ring_lift,
            "semantic_base": semantic_base, "semantic_step": semantic_step,
            "max_arc_height": max_arc_height,
        }

        def compute() -> dict:
            session = store.load_session(session_id)
            config = layout_mod.LayoutConfig(
                ring_touch=ring_touch, ring_move=ring_move, ring_lift=ring_lift,
                semantic_base=semantic_base, semantic_step=semantic_step,
                max_arc_height=max_arc_height,
            )
            regions = _region_objects(store.get_regions(session_id))
            return layout_mod.layout_to_dict(
                layout_mod.build_radial_layout(session, config, regions)
            )

        return _cached(session_id, "layout", params, compute, extra=store.regions_hash(session_id))

    # -- queries ------------------------------------------------------------

    @app.post("/sessions/{session_id}/query")
    def post_query(session_id: str, body: QueryRequest):
        session = store.load_session(session_id)
        result = layout_mod.spatial_query(session, body.area.to_area(), body.mode)
        return Response(content=_json_bytes(layout_mod.query_to_dict(result)),
                        media_type="application/json")

    # -- semantic regions -----------------------------------------------------

    @app.get("/sessions/{session_id}/regions")
    def get_regions(session_id: str):
        return {"regions": store.get_regions(session_id)}

    @app.post("/sessions/{session_id}/regions")
    def post_regions(session_id: str, body: list[RegionModel]):
        if not store.exists(session_id):
            raise SessionNotFound(f"no session {session_id!r}")
        stored = [r.model_dump() for r in body]
        layout_mod.validate_regions(_region_objects(
            [{"region_id": r["region_id"], "label": r["label"], "ring": r["ring"],
              "cx": r["cx"], "cy": r["cy"], "radius": r["radius"]} for r in stored]
        ))
        store.put_regions(session_id, stored)
        return {"regions": len(stored)}

    # -- confidence regions ----------------------------------------------------

    @app.post("/sessions/{session_id}/confidence-region")
    def post_confidence(session_id: str, body: ConfidenceRequest):
        params = body.model_dump()

        def compute() -> dict:
            session = store.load_session(session_id)
            wanted = {Action(a) for a in body.actions}
            points = [(e.x, e.y) for e in session.events if e.action in wanted]
            fit = confidence_region(points, (body.cx, body.cy), body.radius, body.confidence)
            mirrored = (
                body.edge == "right"
                if body.edge != "auto"
                else fit.new_center[0] > session.device.width_px / 2.0
            )
            metrics = region_metrics(fit, session.device, mirrored=mirrored)
            return {
                "selection_center": list(fit.selection_center),
                "selection_radius": fit.selection_radius,
                "confidence": fit.confidence,
                "sampling_number": len(points),
                "original_center": list(fit.original_center),
                "original_count": fit.original_count,
                "new_center": list(fit.new_center),
                "new_radius": fit.new_radius,
                "new_count": fit.new_count,
                "metrics": {
                    "distance_to_left_mm": metrics.distance_to_left,
                    "distance_to_bottom_mm": metrics.distance_to_bottom,
                    "diameter_mm": metrics.diameter,
                    "mirrored": metrics.mirrored,
                },
            }

        return _cached(session_id, "confidence", params, compute)

    # -- clustering -------------------------------------------------------------

    @app.post("/sessions/{session_id}/cluster")
    def post_cluster(session_id: str, body: ClusterRequest):
        params = body.model_dump()

        def compute() -> dict:
            session = store.load_session(session_id)
            gestures = [g for g in session.gestures if path_length(g) >= body.min_length_px]
            vectors = [resample(g, body.n_samples) for g in gestures]
            config = KMeansConfig(
                max_iterations=body.max_iterations,
                seed=body.seed,
                distance=DistanceConfig(
                    weight_euclid=body.weight_euclid,
                    n_samples=body.n_samples,
                    euclid_normalizer=session.device.diagonal_px,
                ),
            )
            result = kmeans(vectors, body.k, config)
            return {
                "k": result.k,
                "seed": result.seed,
                "iterations": result.iterations,
                "inertia": result.inertia,
                "n_vectors": len(vectors),
                "cluster_sizes": result.cluster_sizes(),
                "assignment": {str(gid): c for gid, c in sorted(result.assignment.items())},
                "centroids": [[list(p) for p in c.pts] for c in result.centroids],
            }

        return _cached(session_id, "cluster", params, compute)

    # -- heat map ----------------------------------------------------------------

    @app.get("/sessions/{session_id}/heatmap")
    def get_heatmap(session_id: str, cols: int = 16, rows: int = 9, actions: str | None = None):
        params = {"cols": cols, "rows": rows, "actions": actions or ""}

        def compute() -> dict:
            session = store.load_session(session_id)
            grid = layout_mod.heatmap(session, cols, rows, actions=_parse_actions(actions))
            return layout_mod.heatmap_to_dict(grid)

        return _cached(session_id, "heatmap", params, compute)

    return app
