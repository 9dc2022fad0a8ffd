"""Batch commands reproducing the analysis workflows without the UI.

All randomness funnels through --seed and every output is byte-stable for
identical inputs and flags.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import fixtures as fixtures_mod
from .clustering import (
    KMeansConfig,
    confidence_region,
    format_report,
    kmeans,
    region_metrics,
    region_report_row,
)
from .errors import EmptySelection, TouchtrailError
from .ingest import Action, Session, parse_log, segment_gestures, serialize_session, validation_report
from .layout import LayoutConfig, SemanticRegion, build_radial_layout, validate_regions
from .metrics import DistanceConfig, path_length, resample
from .svgrender import render_cluster_svg, render_layout_svg, render_verify_svg

ACTION_BY_KIND = {"touch": Action.DOWN, "move": Action.MOVE, "lift": Action.UP}


def _fail(exc: Exception) -> None:
    name = exc.name if isinstance(exc, TouchtrailError) else type(exc).__name__
    click.echo(f"error: {name}: {exc}", err=True)
    sys.exit(1)


def _load_session(path: Path) -> Session:
    with open(path, "rb") as handle:
        return segment_gestures(parse_log(handle, session_id=path.stem))


def _load_regions_file(path: Path) -> list[SemanticRegion]:
    """One region per line: label,ring,cx,cy,r (blank lines and # comments allowed)."""
    regions: list[SemanticRegion] = []
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        label, ring, cx, cy, r = (f.strip() for f in line.split(","))
        regions.append(
            SemanticRegion(
                region_id=label.lower().replace(" ", "_"),
                label=label,
                cx=float(cx),
                cy=float(cy),
                radius=float(r),
                ring_index=int(ring),
            )
        )
    validate_regions(regions)
    return regions


def _write(out_dir: Path, name: str, content: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    path.write_text(content, encoding="utf-8", newline="\n")
    return path


@click.group()
def main() -> None:
    """Analytics for multi-touch interaction logs from joystick-based game apps."""


@main.command("ingest")
@click.argument("logs", nargs=-1, required=True, type=click.Path(exists=True, path_type=Path))
def cmd_ingest(logs: tuple[Path, ...]) -> None:
    """Parse and segment logs, printing a per-session summary."""
    for path in logs:
        try:
            session = _load_session(path)
        except TouchtrailError as exc:
            _fail(exc)
        click.echo(
            f"{path.name}: {len(session.events)} events, {len(session.gestures)} gestures, "
            f"{len(session.orphans)} orphans, {session.duration / 1000.0:.1f} s"
        )
        if session.rejected or session.orphans:
            click.echo(validation_report(session))


@main.command("verify-ui")
@click.argument("logs", nargs=-1, required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--regions", "regions_file", required=True, type=click.Path(exists=True, path_type=Path),
              help="Region definitions, one per line: label,ring,cx,cy,r.")
@click.option("--confidence", "confidences", multiple=True, type=float, default=(0.95, 0.99),
              show_default=True, help="Confidence coefficients; repeat for several.")
@click.option("--actions", "kinds", multiple=True, type=click.Choice(["touch", "move"]),
              default=("touch",), show_default=True, help="Which dot kinds each region selects.")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=Path("verify-ui-out"),
              show_default=True)
def cmd_verify_ui(
    logs: tuple[Path, ...],
    regions_file: Path,
    confidences: tuple[float, ...],
    kinds: tuple[str, ...],
    out_dir: Path,
) -> None:
    """Fit confidence regions for each defined screen region and report mm metrics."""
    try:
        regions = _load_regions_file(regions_file)
        sessions = [_load_session(path) for path in logs]
    except (TouchtrailError, ValueError) as exc:
        _fail(exc)

    device = sessions[0].device
    pools: dict[str, list[tuple[float, float]]] = {}
    for kind in kinds:
        action = ACTION_BY_KIND[kind]
        pools[kind] = [(e.x, e.y) for s in sessions for e in s.events if e.action is action]

    sections: list[str] = []
    overlay_entries = []
    for c in sorted(confidences):
        rows = []
        for region in regions:
            for kind in kinds:
                label = region.label if len(kinds) == 1 else f"{region.label}/{kind}"
                try:
                    fit = confidence_region(pools[kind], (region.cx, region.cy), region.radius, c)
                except EmptySelection:
                    rows.append([label, f"{region.radius:.3f}", str(len(pools[kind])),
                                 "-", "0", "-", "-", "0", "no interactions", "-", "-"])
                    continue
                mirrored = fit.new_center[0] > device.width_px / 2.0
                metrics = region_metrics(fit, device, mirrored=mirrored)
                rows.append(region_report_row(label, fit, metrics, len(pools[kind])))
                overlay_entries.append((label, fit))
        sections.append(format_report(rows, f"Confidence Coefficient: {c:g}"))

    report = "\n".join(sections)
    click.echo(report, nl=False)
    report_path = _write(out_dir, "verify_ui_report.txt", report)
    svg_path = _write(out_dir, "verify_ui_overlay.svg",
                      render_verify_svg(device, overlay_entries, regions))
    click.echo(f"report: {report_path}")
    click.echo(f"overlay: {svg_path}")


@main.command("cluster")
@click.argument("logs", nargs=-1, required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--k", required=True, type=int, help="Number of clusters.")
@click.option("--n-samples", default=32, show_default=True, type=int)
@click.option("--weight-euclid", default=0.5, show_default=True, type=float)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--min-length-px", default=300.0, show_default=True, type=float,
              help="Drop gestures shorter than this path length before clustering.")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=Path("cluster-out"),
              show_default=True)
def cmd_cluster(
    logs: tuple[Path, ...],
    k: int,
    n_samples: int,
    weight_euclid: float,
    seed: int,
    min_length_px: float,
    out_dir: Path,
) -> None:
    """Cluster long-distance gestures and render per-cluster mean trajectories."""
    try:
        sessions = [_load_session(path) for path in logs]
        device = sessions[0].device

        labels: dict[int, str] = {}
        vectors = []
        total = 0
        for session in sessions:
            for gesture in session.gestures:
                total += 1
                if path_length(gesture) < min_length_px:
                    continue
                global_id = len(vectors)
                labels[global_id] = f"{session.session_id}:{gesture.gesture_id}"
                vector = resample(gesture, n_samples)
                vectors.append(
                    type(vector)(gesture_id=global_id, pts=vector.pts,
                                 source_length=vector.source_length)
                )

        config = KMeansConfig(
            seed=seed,
            distance=DistanceConfig(
                weight_euclid=weight_euclid,
                n_samples=n_samples,
                euclid_normalizer=device.diagonal_px,
            ),
        )
        result = kmeans(vectors, k, config)
    except TouchtrailError as exc:
        _fail(exc)

    from .clustering import _distance_matrix, _stack  # exemplar = member closest to centroid

    data = _stack(vectors)
    centroid_data = _stack(list(result.centroids))
    distances = _distance_matrix(data, centroid_data, config.distance)

    lines = [
        "cluster report",
        f"k={k} seed={seed} n_samples={n_samples} weight_euclid={weight_euclid:g} "
        f"min_length_px={min_length_px:g}",
        f"vectors={len(vectors)} of {total} gestures",
        f"iterations={result.iterations} inertia={result.inertia:.6f}",
    ]
    sizes = result.cluster_sizes()
    for cluster in range(k):
        member_ids = [gid for gid, c in result.assignment.items() if c == cluster]
        exemplar = min(member_ids, key=lambda gid: (distances[gid][cluster], gid))
        mean_len = sum(vectors[gid].source_length for gid in member_ids) / len(member_ids)
        lines.append(
            f"cluster {cluster}: size={sizes[cluster]} exemplar={labels[exemplar]} "
            f"mean_path_px={mean_len:.1f}"
        )
    report = "\n".join(lines) + "\n"

    click.echo(report, nl=False)
    report_path = _write(out_dir, "cluster_report.txt", report)
    svg_path = _write(out_dir, "cluster_trajectories.svg",
                      render_cluster_svg(device, result, vectors))
    click.echo(f"report: {report_path}")
    click.echo(f"trajectories: {svg_path}")


@main.command("layout")
@click.argument("log", type=click.Path(exists=True, path_type=Path))
@click.option("--regions", "regions_file", type=click.Path(exists=True, path_type=Path),
              default=None, help="Optional semantic regions to map onto outer rings.")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=Path("layout-out"),
              show_default=True)
def cmd_layout(log: Path, regions_file: Path | None, out_dir: Path) -> None:
    """Render the radial spatiotemporal layout of one session to SVG."""
    try:
        session = _load_session(log)
        regions = _load_regions_file(regions_file) if regions_file else []
        radial = build_radial_layout(session, LayoutConfig(), regions)
    except (TouchtrailError, ValueError) as exc:
        _fail(exc)
    path = _write(out_dir, f"{session.session_id}_layout.svg", render_layout_svg(radial, session))
    click.echo(f"layout: {path}")


@main.command("serve")
@click.option("--store", "store_root", type=click.Path(path_type=Path), default=Path("touchtrail-store"),
              show_default=True, envvar="TOUCHTRAIL_STORE")
@click.option("--bind", default="127.0.0.1:8000", show_default=True, envvar="TOUCHTRAIL_BIND")
@click.option("--n-samples", default=32, show_default=True, type=int)
def cmd_serve(store_root: Path, bind: str, n_samples: int) -> None:
    """Run the HTTP service backing the explorer UI."""
    import uvicorn

    from .service import create_app

    host, _, port = bind.partition(":")
    app = create_app(str(store_root), default_n_samples=n_samples)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or "8000"))


@main.command("make-fixtures")
@click.argument("out_dir", type=click.Path(path_type=Path))
def cmd_make_fixtures(out_dir: Path) -> None:
    """Write the bundled synthetic sessions (novice, expert, study corpus) as logs."""
    out_dir.mkdir(parents=True, exist_ok=True)

    for session in (fixtures_mod.novice_session(), fixtures_mod.expert_session()):
        _write(out_dir, f"{session.session_id}.log", serialize_session(session))

    corpus_dir = out_dir / "corpus"
    sessions, manifest = fixtures_mod.study_corpus()
    for session in sessions:
        _write(corpus_dir, f"{session.session_id}.log", serialize_session(session))
    _write(out_dir, "corpus_manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")

    two_motif, motif_manifest = fixtures_mod.two_motif_session()
    _write(out_dir, "two_motif.log", serialize_session(two_motif))
    _write(out_dir, "two_motif_manifest.json",
           json.dumps(motif_manifest, indent=2, sort_keys=True, default=str) + "\n")

    region_lines = [
        f"{r.label},{r.ring_index},{r.cx:g},{r.cy:g},{r.radius:g}" for r in fixtures_mod.skill_regions()
    ]
    stick = fixtures_mod.joystick_area()
    region_lines.append(f"joystick,5,{stick.cx:g},{stick.cy:g},{stick.radius:g}")
    _write(out_dir, "regions.csv", "\n".join(region_lines) + "\n")
    click.echo(f"fixtures written to {out_dir}")


if __name__ == "__main__":
    main()
