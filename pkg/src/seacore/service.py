"""Local HTTP API binding the catalog, interpolation, palettes, and
annotations together for the browser workspace.

The service is strictly offline: it reads one workspace directory, serves
static UI assets itself, and never makes an outbound request. Interpolation
requests run on a background queue (FIFO, one at a time by default) and are
content-addressed: identical requests share one job and its result.
"""

from __future__ import annotations

import hashlib
import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Query, Request
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from . import __version__
from .annotate import AnnotationLog, load as load_annotations, new_stroke, log_to_doc, persist
from .catalog import Catalog, CoreFilter
from .errors import (
    DegeneracyError,
    EmptySelectionError,
    GridTooLargeError,
    InvalidGridError,
    NoDataError,
    NotFoundError,
    OutOfBoundsError,
    SeacoreError,
)
from .geo import GeoPoint
from .ingest import load_workspace, parse_date
from .interp import (
    DEFAULT_VOXEL_CAP,
    build_grid_spec,
    barycentric_weights,
    extract_virtual_core,
    gather_sample_points,
    grid_from_doc,
    grid_to_doc,
    run_interpolation,
    validate_cell_size,
    virtual_core_to_doc,
    METHODS,
)
from .vsup import VsupQuantizer

PACKAGED_STATIC = Path(__file__).parent / "static"


class BadRequest(SeacoreError):
    code = "bad-request"

    def __init__(self, message: str, code: str = "bad-request"):
        super().__init__(message)
        self.code = code


def _status_for(exc: SeacoreError) -> int:
    if isinstance(exc, NotFoundError):
        return 404
    if isinstance(exc, DegeneracyError):
        return 409
    if isinstance(exc, GridTooLargeError):
        return 422
    return 400


def _error_payload(exc: SeacoreError) -> dict:
    payload = {"code": exc.code, "message": exc.message}
    if isinstance(exc, DegeneracyError):
        payload["hint"] = "use sibson"
    if isinstance(exc, GridTooLargeError):
        payload["voxel_count"] = exc.voxel_count
    return payload


@dataclass
class Job:
    job_id: str
    request: dict
    status: str = "queued"
    error: dict | None = None
    result: dict | None = None


class JobQueue:
    """Content-addressed FIFO job runner.

    The job id is a hash of the canonical request, so resubmitting an
    identical request returns the existing job and, once done, its cached
    result; cached and fresh results are the same object, hence
    bit-identical.
    """

    def __init__(self, runner, max_workers: int = 1):
        self._runner = runner
        self._pool = ThreadPoolExecutor(max_workers=max_workers)
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()

    @staticmethod
    def job_id_for(request: dict) -> str:
        canonical = json.dumps(request, sort_keys=True, separators=(",", ":"))
        return "int-" + hashlib.sha256(canonical.encode()).hexdigest()[:16]

    def submit(self, request: dict) -> str:
        job_id = self.job_id_for(request)
        with self._lock:
            if job_id in self._jobs:
                return job_id
            job = Job(job_id=job_id, request=request)
            self._jobs[job_id] = job
        self._pool.submit(self._run, job)
        return job_id

    def get(self, job_id: str) -> Job:
        try:
            return self._jobs[job_id]
        except KeyError:
            raise NotFoundError(f"unknown job {job_id!r}") from None

    def _run(self, job: Job):
        job.status = "running"
        try:
            job.result = self._runner(job.request)
            job.status = "done"
        except SeacoreError as e:
            job.error = _error_payload(e)
            job.status = "failed"
        except Exception as e:  # pragma: no cover - defensive
            job.error = {"code": "internal", "message": str(e)}
            job.status = "failed"


def vsup_arrays(doc: dict, quantizer: VsupQuantizer) -> dict:
    """Per-voxel palette bin assignment for a grid document.

    Vectorized version of vsup.quantize over the whole grid, normalizing
    values against the document's own min/max. Empty voxels get null.
    """
    values = np.array(
        [np.nan if v is None else v for v in doc["values"]], dtype=np.float64
    )
    uncertainty = np.array(doc["uncertainty"], dtype=np.float64)
    lo, hi = doc["value_min"], doc["value_max"]
    if lo is None or hi is None or hi <= lo:
        vnorm = np.zeros_like(values)
    else:
        vnorm = np.clip((values - lo) / (hi - lo), 0.0, 1.0)
    u = np.clip(uncertainty, 0.0, 1.0)

    n_layers = quantizer.layers
    layer = np.minimum(n_layers - 1, ((1.0 - u) * n_layers).astype(np.int64))
    bins = quantizer.branching ** layer
    empty = np.isnan(values)
    vbin = np.minimum(bins - 1, (np.nan_to_num(vnorm) * bins).astype(np.int64))
    return {
        "quantizer": {"layers": quantizer.layers, "branching": quantizer.branching},
        "layer": [None if e else int(l) for e, l in zip(empty, layer)],
        "bin": [None if e else int(b) for e, b in zip(empty, vbin)],
    }


def _parse_vsup(doc: dict | None) -> VsupQuantizer:
    doc = doc or {}
    if not isinstance(doc, dict):
        raise BadRequest("vsup must be an object", "bad-vsup")
    try:
        return VsupQuantizer(
            layers=int(doc.get("layers", 4)), branching=int(doc.get("branching", 2))
        )
    except (TypeError, ValueError) as e:
        raise BadRequest(f"invalid vsup parameters: {e}", "bad-vsup") from None


def _core_payload(catalog: Catalog, core) -> dict:
    return {
        "core_id": core.core_id,
        "location": core.location_name,
        "date": core.date.isoformat(),
        "core_fate": core.core_fate,
        "lat": core.position.lat,
        "lon": core.position.lon,
        "extra_measurements": core.extra_measurements,
        "horizon_count": len(catalog.horizons_of(core.core_id)),
    }


def create_app(
    workspace_dir: Path | str,
    voxel_cap: int = DEFAULT_VOXEL_CAP,
    static_dir: Path | str | None = None,
    job_workers: int = 1,
) -> FastAPI:
    root = Path(workspace_dir)
    catalog, report = load_workspace(root)
    if not report.ok:
        problems = "; ".join(f"row {r}: {m}" for r, m in report.errors[:5])
        raise SeacoreError(f"workspace failed to load: {problems}")

    annotations_path = root / "annotations.json"
    state = {"annotations": load_annotations(annotations_path)}
    ann_lock = threading.Lock()

    def run_job(request: dict) -> dict:
        grid = run_interpolation(
            catalog,
            request["core_ids"],
            request["parameter"],
            request["method"],
            request["cell_xy_cm"],
            request["padding_cells"],
            voxel_cap,
        )
        doc = grid_to_doc(grid)
        quantizer = VsupQuantizer(**request["vsup"])
        return {"grid": doc, "vsup": vsup_arrays(doc, quantizer)}

    jobs = JobQueue(run_job, max_workers=job_workers)

    app = FastAPI(title="seacore", version=__version__, docs_url=None, redoc_url=None)

    @app.exception_handler(SeacoreError)
    async def seacore_error_handler(_: Request, exc: SeacoreError):
        return JSONResponse(status_code=_status_for(exc), content=_error_payload(exc))

    # -- catalog ---------------------------------------------------------

    @app.get("/api/workspace")
    def workspace_summary():
        cores = catalog.cores
        dates = sorted(c.date for c in cores)
        return {
            "cores": len(cores),
            "horizons": len(catalog.all_horizons()),
            "parameters": len(catalog.parameters),
            "maps": len(catalog.layers),
            "locations": sorted({c.location_name for c in cores}),
            "core_fates": sorted({c.core_fate for c in cores}),
            "date_range": {
                "from": dates[0].isoformat() if dates else None,
                "to": dates[-1].isoformat() if dates else None,
            },
            "annotations": len(state["annotations"].applied),
            "version": __version__,
        }

    @app.get("/api/cores")
    def list_cores(
        location: str | None = None,
        date_from: str | None = Query(None, alias="from"),
        date_to: str | None = Query(None, alias="to"),
        fate: str | None = None,
    ):
        try:
            flt = CoreFilter(
                location_name=location,
                date_from=parse_date(date_from) if date_from else None,
                date_to=parse_date(date_to) if date_to else None,
                core_fate=fate,
            )
        except ValueError as e:
            raise BadRequest(str(e), "bad-filter") from None
        return [_core_payload(catalog, c) for c in catalog.filter_cores(flt)]

    @app.get("/api/cores/{core_id}/horizons")
    def core_horizons(core_id: str, parameter: str | None = None, step: int | None = None):
        horizons = catalog.horizons_of(core_id)
        if parameter is None:
            return {
                "core_id": core_id,
                "horizons": [
                    {
                        "top_cm": h.top_cm,
                        "bottom_cm": h.bottom_cm,
                        "label": h.label,
                        "params": h.params,
                    }
                    for h in horizons
                ],
            }
        if step is not None and step <= 0:
            raise BadRequest("step must be a positive integer", "bad-step")
        selection = catalog.make_selection([core_id])
        resampled = catalog.resample_to_smallest_step(selection, parameter, step=step)
        entries = resampled[core_id]
        used_step = (
            step
            if step is not None
            else min((h.thickness_cm for h in horizons), default=1)
        )
        return {
            "core_id": core_id,
            "parameter": parameter,
            "step_cm": used_step,
            "entries": [
                {
                    "depth_cm": s.depth_cm,
                    "value": s.value,
                    "horizon_label": s.horizon_label,
                }
                for s in entries
            ],
        }

    @app.get("/api/parameters")
    def list_parameters():
        return [
            {
                "name": p.name,
                "kind": p.kind,
                "observed_min": p.observed_min,
                "observed_max": p.observed_max,
            }
            for p in catalog.parameters
        ]

    @app.get("/api/maps")
    def list_maps():
        return [
            {
                "id": m.layer_id,
                "title": m.title,
                "kind": m.kind,
                "west": m.bounds.west,
                "east": m.bounds.east,
                "south": m.bounds.south,
                "north": m.bounds.north,
                "native_resolution_cm": m.native_resolution_cm,
            }
            for m in catalog.layers
        ]

    @app.get("/api/maps/{layer_id}/image")
    def map_image(layer_id: str):
        layer = catalog.layer(layer_id)
        return FileResponse(layer.image_ref, media_type="image/png")

    # -- interpolation jobs ----------------------------------------------

    def _validate_interpolation_request(body: dict) -> dict:
        if not isinstance(body, dict):
            raise BadRequest("request body must be a JSON object")
        method = body.get("method")
        if method not in METHODS:
            raise BadRequest(
                f"method must be one of {', '.join(METHODS)}, got {method!r}",
                "bad-method",
            )
        parameter = body.get("parameter")
        if not isinstance(parameter, str) or not parameter:
            raise BadRequest("parameter is required", "bad-parameter")
        catalog.parameter(parameter)  # 404 on unknown

        cell = body.get("cell_xy_cm")
        if not isinstance(cell, int) or isinstance(cell, bool):
            raise BadRequest("cell_xy_cm must be an integer", "bad-cell-size")
        validate_cell_size(cell)

        core_ids = body.get("core_ids")
        if not isinstance(core_ids, list) or not core_ids or not all(
            isinstance(c, str) for c in core_ids
        ):
            raise BadRequest("core_ids must be a non-empty list of strings", "bad-core-ids")
        padding = body.get("padding_cells", 0)
        if not isinstance(padding, int) or isinstance(padding, bool) or padding < 0:
            raise BadRequest("padding_cells must be a non-negative integer", "bad-padding")
        quantizer = _parse_vsup(body.get("vsup"))

        # pre-flight: surface selection, sizing, and degeneracy problems
        # synchronously instead of burying them in a failed job
        selection = catalog.make_selection(core_ids)
        spec = build_grid_spec(catalog, selection, parameter, cell, padding, voxel_cap)
        points = gather_sample_points(catalog, selection, parameter, spec.frame)
        if method == "linear":
            probe = np.zeros((1, 3), dtype=np.float64)
            barycentric_weights(points, spec, probe)  # raises DegeneracyError

        return {
            "method": method,
            "parameter": parameter,
            "cell_xy_cm": cell,
            "core_ids": list(core_ids),
            "padding_cells": padding,
            "vsup": {"layers": quantizer.layers, "branching": quantizer.branching},
        }

    @app.post("/api/interpolations")
    async def submit_interpolation(request: Request):
        try:
            body = await request.json()
        except Exception:
            raise BadRequest("request body must be valid JSON") from None
        canonical = _validate_interpolation_request(body)
        job_id = jobs.submit(canonical)
        return {"job_id": job_id, "status": jobs.get(job_id).status}

    @app.get("/api/interpolations/{job_id}")
    def interpolation_status(job_id: str):
        job = jobs.get(job_id)
        payload = {"job_id": job.job_id, "status": job.status, "request": job.request}
        if job.status == "done":
            payload["result"] = job.result
        elif job.status == "failed":
            payload["error"] = job.error
        return payload

    @app.post("/api/virtual-core")
    async def virtual_core(request: Request):
        try:
            body = await request.json()
        except Exception:
            raise BadRequest("request body must be valid JSON") from None
        job = jobs.get(str(body.get("job_id")))
        if job.status != "done":
            raise BadRequest(
                f"job {job.job_id} is {job.status}, not done", "job-not-done"
            )
        try:
            p = GeoPoint(float(body["lat"]), float(body["lon"]))
        except (KeyError, TypeError, ValueError) as e:
            raise BadRequest(f"invalid lat/lon: {e}", "bad-position") from None
        grid = grid_from_doc(job.result["grid"])
        return virtual_core_to_doc(extract_virtual_core(grid, p))

    # -- annotations -------------------------------------------------------

    def _persist_annotations():
        persist(state["annotations"], annotations_path)

    @app.get("/api/annotations")
    def get_annotations():
        return log_to_doc(state["annotations"])

    @app.post("/api/annotations/strokes")
    async def add_stroke(request: Request):
        try:
            body = await request.json()
        except Exception:
            raise BadRequest("request body must be valid JSON") from None
        try:
            path = [GeoPoint(float(p["lat"]), float(p["lon"])) for p in body["path"]]
            stroke = new_stroke(
                color_index=int(body["color_index"]),
                path=path,
                note=body.get("note"),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise BadRequest(f"invalid stroke: {e}", "bad-stroke") from None
        with ann_lock:
            state["annotations"] = state["annotations"].add(stroke)
            _persist_annotations()
        return {"stroke_id": stroke.stroke_id, "applied": len(state["annotations"].applied)}

    @app.post("/api/annotations/undo")
    def undo_annotation():
        with ann_lock:
            state["annotations"] = state["annotations"].undo()
            _persist_annotations()
            log = state["annotations"]
        return {"applied": len(log.applied), "undone": len(log.undone)}

    @app.post("/api/annotations/redo")
    def redo_annotation():
        with ann_lock:
            state["annotations"] = state["annotations"].redo()
            _persist_annotations()
            log = state["annotations"]
        return {"applied": len(log.applied), "undone": len(log.undone)}

    # -- reserved ----------------------------------------------------------

    @app.post("/api/ingest")
    def ingest_reserved():
        return JSONResponse(
            status_code=501,
            content={
                "code": "reserved",
                "message": "incremental ingest is reserved; re-run the ingest CLI",
            },
        )

    # -- static UI ----------------------------------------------------------

    assets = Path(static_dir) if static_dir else PACKAGED_STATIC
    if assets.is_dir():
        app.mount("/", StaticFiles(directory=assets, html=True), name="ui")

    return app
