"""Batch entry points: ingest/validate workspaces, run interpolations
headlessly, extract virtual cores, and launch the local service.

Exit codes: 0 success, 1 usage, 2 data error, 3 numerical degeneracy.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .annotate import load as load_annotations
from .errors import (
    DegeneracyError,
    InvalidGridError,
    SeacoreError,
)
from .geo import GeoPoint
from .ingest import IngestReport, build_workspace, load_workspace, write_workspace
from .interp import (
    DEFAULT_VOXEL_CAP,
    extract_virtual_core,
    grid_from_doc,
    grid_to_doc,
    run_interpolation,
    virtual_core_to_doc,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_DEGENERATE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _report_lines(report: IngestReport) -> list[str]:
    lines = [report.summary()]
    for row, msg in report.warnings:
        lines.append(f"  warning row {row}: {msg}")
    for row, msg in report.errors:
        lines.append(f"  error row {row}: {msg}")
    return lines


def _report_doc(report: IngestReport) -> dict:
    return {
        "cores_loaded": report.cores_loaded,
        "horizons_loaded": report.horizons_loaded,
        "parameters_discovered": report.parameters_discovered,
        "warnings": [{"row": r, "message": m} for r, m in report.warnings],
        "errors": [{"row": r, "message": m} for r, m in report.errors],
    }


def cmd_ingest(args) -> int:
    cores_text = Path(args.cores).read_text()
    samples_text = Path(args.samples).read_text()
    manifest_text = Path(args.maps).read_text() if args.maps else None
    param_kinds = None
    if args.param_kinds:
        param_kinds = {
            str(k): str(v)
            for k, v in json.loads(Path(args.param_kinds).read_text()).items()
        }
    catalog, report = build_workspace(
        cores_text,
        samples_text,
        manifest_text,
        manifest_dir=Path(args.maps).parent if args.maps else ".",
        param_kinds=param_kinds,
    )
    write_workspace(args.out, catalog, param_kinds=param_kinds)
    if args.json:
        print(json.dumps(_report_doc(report), indent=2))
    else:
        print("\n".join(_report_lines(report)))
        print(f"workspace written to {args.out}")
    return EXIT_OK if report.ok else EXIT_DATA


def cmd_validate(args) -> int:
    problems: list[str] = []
    catalog, report = load_workspace(args.workspace)
    problems.extend(f"row {r}: {m}" for r, m in report.errors)
    try:
        load_annotations(Path(args.workspace) / "annotations.json")
    except Exception as e:
        problems.append(f"annotations.json failed to load: {e}")
    for layer in catalog.layers:
        if not Path(layer.image_ref).is_file():
            problems.append(f"map {layer.layer_id}: image missing: {layer.image_ref}")
    for p in catalog.parameters:
        if (
            p.observed_min is not None
            and p.observed_max is not None
            and p.observed_min > p.observed_max
        ):
            problems.append(f"parameter {p.name}: min exceeds max")
    for core in catalog.cores:
        hs = catalog.horizons_of(core.core_id)
        for a, b in zip(hs, hs[1:]):
            if b.top_cm < a.bottom_cm:
                problems.append(f"core {core.core_id}: overlap {a.label} / {b.label}")

    if args.json:
        print(
            json.dumps(
                {"ok": not problems, "problems": problems, "report": _report_doc(report)},
                indent=2,
            )
        )
    elif problems:
        print(f"workspace {args.workspace} has {len(problems)} problem(s):")
        for p in problems:
            print(f"  {p}")
    else:
        print(f"workspace {args.workspace} OK: {report.summary()}")
    return EXIT_DATA if problems else EXIT_OK


def _load_catalog_or_fail(workspace: str):
    catalog, report = load_workspace(workspace)
    if not report.ok:
        raise SeacoreError(
            "workspace failed to load: "
            + "; ".join(f"row {r}: {m}" for r, m in report.errors[:5])
        )
    return catalog


def cmd_interp(args) -> int:
    catalog = _load_catalog_or_fail(args.workspace)
    grid = run_interpolation(
        catalog,
        args.cores,
        args.param,
        args.method,
        args.grid_cm,
        padding_cells=args.padding,
        voxel_cap=args.cap,
    )
    doc = grid_to_doc(grid)
    out = Path(args.out)
    out.write_text(json.dumps(doc, separators=(",", ":")))
    if args.json:
        print(
            json.dumps(
                {
                    "out": str(out),
                    "voxels": grid.spec.voxel_count,
                    "nx": grid.spec.nx,
                    "ny": grid.spec.ny,
                    "nz": grid.spec.nz,
                    "method": grid.method,
                    "parameter": grid.parameter,
                }
            )
        )
    else:
        print(
            f"wrote {grid.method} grid of {grid.spec.nx}x{grid.spec.ny}x"
            f"{grid.spec.nz} voxels for {grid.parameter!r} to {out}"
        )
    return EXIT_OK


def cmd_virtual_core(args) -> int:
    doc = json.loads(Path(args.grid).read_text())
    grid = grid_from_doc(doc)
    core = extract_virtual_core(grid, GeoPoint(args.lat, args.lon))
    out = Path(args.out)
    out.write_text(json.dumps(virtual_core_to_doc(core), indent=2))
    if args.json:
        print(json.dumps({"out": str(out), "horizons": len(core.horizons)}))
    else:
        print(f"wrote virtual core with {len(core.horizons)} horizons to {out}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(
        args.workspace,
        voxel_cap=args.cap,
        static_dir=args.ui_dir,
    )
    uvicorn.run(app, host=args.bind, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="seacore", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="build a workspace directory from raw CSVs")
    p.add_argument("--cores", required=True, help="core-level CSV file")
    p.add_argument("--samples", required=True, help="sample-level CSV file")
    p.add_argument("--maps", help="map manifest JSON file")
    p.add_argument("--param-kinds", help="optional parameter-kind manifest JSON")
    p.add_argument("--out", required=True, help="workspace directory to create")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("validate", help="re-run invariant checks on a workspace")
    p.add_argument(
        "--workspace",
        default=os.environ.get("SEACORE_WORKSPACE"),
        required="SEACORE_WORKSPACE" not in os.environ,
    )
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("interp", help="run an interpolation headlessly")
    p.add_argument(
        "--workspace",
        default=os.environ.get("SEACORE_WORKSPACE"),
        required="SEACORE_WORKSPACE" not in os.environ,
    )
    p.add_argument("--param", required=True, help="parameter name")
    p.add_argument("--method", required=True, choices=["linear", "sibson"])
    p.add_argument(
        "--grid-cm", required=True, type=int, help="horizontal cell size (multiple of 7)"
    )
    p.add_argument("--cores", required=True, nargs="+", help="core ids to include")
    p.add_argument("--padding", type=int, default=0, help="padding cells per side")
    p.add_argument("--cap", type=int, default=DEFAULT_VOXEL_CAP, help="voxel cap")
    p.add_argument("--out", required=True, help="output grid JSON file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_interp)

    p = sub.add_parser("virtual-core", help="extract a vertical column from a grid")
    p.add_argument("--grid", required=True, help="grid JSON file")
    p.add_argument("--lat", required=True, type=float)
    p.add_argument("--lon", required=True, type=float)
    p.add_argument("--out", required=True, help="output virtual-core JSON file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_virtual_core)

    p = sub.add_parser("serve", help="serve the workspace UI and API locally")
    p.add_argument(
        "--workspace",
        default=os.environ.get("SEACORE_WORKSPACE"),
        required="SEACORE_WORKSPACE" not in os.environ,
    )
    p.add_argument(
        "--port", type=int, default=int(os.environ.get("SEACORE_PORT", "8750"))
    )
    p.add_argument("--bind", default=os.environ.get("SEACORE_BIND", "127.0.0.1"))
    p.add_argument("--ui-dir", help="directory of built UI assets to serve")
    p.add_argument("--cap", type=int, default=DEFAULT_VOXEL_CAP)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except InvalidGridError as e:
        print(f"seacore: {e.message}", file=sys.stderr)
        return EXIT_USAGE
    except DegeneracyError as e:
        print(f"seacore: {e.message}", file=sys.stderr)
        return EXIT_DEGENERATE
    except SeacoreError as e:
        print(f"seacore: {e.message}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as e:
        print(f"seacore: file not found: {e.filename}", file=sys.stderr)
        return EXIT_DATA
    except json.JSONDecodeError as e:
        print(f"seacore: invalid JSON input: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
