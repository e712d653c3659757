"""Parsing and validation of core CSVs, sample CSVs, and map manifests.

All problems are collected into an IngestReport rather than raised: a row
with a bad cell is skipped with a recorded error, so partial data still
loads in the field. ``report.errors`` empty is the definition of success.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import json
import re
import shutil
from dataclasses import dataclass, field
from pathlib import Path

from .catalog import (
    Catalog,
    Core,
    MapLayer,
    ParameterInfo,
    SampleHorizon,
)
from .geo import GeoPoint, GeoRect


@dataclass
class IngestReport:
    cores_loaded: int = 0
    horizons_loaded: int = 0
    parameters_discovered: int = 0
    warnings: list[tuple[int, str]] = field(default_factory=list)
    errors: list[tuple[int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def warn(self, row: int, message: str):
        self.warnings.append((row, message))

    def error(self, row: int, message: str):
        self.errors.append((row, message))

    def merge(self, other: "IngestReport", prefix: str = ""):
        self.warnings.extend((r, prefix + m) for r, m in other.warnings)
        self.errors.extend((r, prefix + m) for r, m in other.errors)

    def summary(self) -> str:
        return (
            f"cores_loaded={self.cores_loaded} "
            f"horizons_loaded={self.horizons_loaded} "
            f"parameters_discovered={self.parameters_discovered} "
            f"warnings={len(self.warnings)} errors={len(self.errors)}"
        )


def _norm_header(name: str) -> str:
    return re.sub(r"[\s_]+", "", name).lower()


def parse_date(text: str) -> dt.date:
    """Accepts MM-DD-YY (mapped to 2000-2099) and ISO YYYY-MM-DD."""
    s = text.strip()
    m = re.fullmatch(r"(\d{1,2})-(\d{1,2})-(\d{2})", s)
    if m:
        month, day, yy = (int(g) for g in m.groups())
        try:
            return dt.date(2000 + yy, month, day)
        except ValueError as e:
            raise ValueError(f"invalid date {text!r}: {e}") from None
    m = re.fullmatch(r"(\d{4})-(\d{1,2})-(\d{1,2})", s)
    if m:
        year, month, day = (int(g) for g in m.groups())
        try:
            return dt.date(year, month, day)
        except ValueError as e:
            raise ValueError(f"invalid date {text!r}: {e}") from None
    raise ValueError(
        f"unparseable date {text!r}: expected MM-DD-YY or YYYY-MM-DD"
    )


def parse_horizon_label(text: str) -> tuple[int, int]:
    """'2-3 cm' -> (2, 3). Tolerates whitespace and a missing 'cm' suffix."""
    m = re.fullmatch(r"\s*(\d+)\s*-\s*(\d+)\s*(?:cm)?\s*", text)
    if not m:
        raise ValueError(f"malformed horizon {text!r}: expected 'a-b cm'")
    top, bottom = int(m.group(1)), int(m.group(2))
    if bottom <= top:
        raise ValueError(f"horizon {text!r}: bottom must exceed top")
    return top, bottom


def _read_rows(text: str) -> list[list[str]]:
    return [row for row in csv.reader(io.StringIO(text))]


_CORE_REQUIRED = {
    "coreid": "Core ID",
    "location": "Location",
    "date": "Date",
    "corefate": "Core Fate",
    "latitude": "Latitude",
    "longitude": "Longitude",
}


def parse_core_csv(text: str) -> tuple[list[Core], IngestReport]:
    """One Core per distinct core id; extra numeric columns become
    per-core measurements. Duplicate ids must agree on every field."""
    report = IngestReport()
    rows = _read_rows(text)
    if not rows:
        report.error(1, "empty file: header row required")
        return [], report
    header = rows[0]
    normed = [_norm_header(h) for h in header]
    col = {}
    for key in _CORE_REQUIRED:
        if key not in normed:
            report.error(1, f"missing required column {_CORE_REQUIRED[key]!r}")
        else:
            col[key] = normed.index(key)
    if report.errors:
        return [], report
    extra_cols = [
        (i, header[i].strip())
        for i, n in enumerate(normed)
        if n not in _CORE_REQUIRED and header[i].strip()
    ]

    cores: dict[str, Core] = {}
    for row_no, raw in enumerate(rows[1:], start=2):
        if not any(cell.strip() for cell in raw):
            continue
        cells = raw + [""] * (len(header) - len(raw))
        core_id = cells[col["coreid"]].strip()
        if not core_id:
            report.error(row_no, "empty Core ID")
            continue
        try:
            lat = float(cells[col["latitude"]])
            lon = float(cells[col["longitude"]])
        except ValueError:
            report.error(
                row_no,
                f"unparseable latitude/longitude "
                f"({cells[col['latitude']]!r}, {cells[col['longitude']]!r})",
            )
            continue
        try:
            position = GeoPoint(lat, lon)
        except ValueError as e:
            report.error(row_no, str(e))
            continue
        try:
            date = parse_date(cells[col["date"]])
        except ValueError as e:
            report.error(row_no, str(e))
            continue

        extras: dict[str, float] = {}
        for i, name in extra_cols:
            cell = cells[i].strip()
            if not cell:
                continue
            try:
                extras[name] = float(cell)
            except ValueError:
                report.warn(row_no, f"non-numeric value {cell!r} in column {name!r}")

        core = Core(
            core_id=core_id,
            location_name=cells[col["location"]].strip(),
            date=date,
            core_fate=cells[col["corefate"]].strip(),
            position=position,
            extra_measurements=extras,
        )
        if core_id in cores:
            if cores[core_id] != core:
                report.error(
                    row_no, f"duplicate core {core_id!r} with conflicting fields"
                )
            continue
        cores[core_id] = core

    report.cores_loaded = len(cores)
    return list(cores.values()), report


def parse_sample_csv(
    text: str, known_core_ids: set[str] | None = None
) -> tuple[list[SampleHorizon], IngestReport]:
    """Horizon rows; every non-required column is a parameter. Horizons
    referencing cores absent from ``known_core_ids`` are kept with a
    warning so partial datasets still load."""
    report = IngestReport()
    rows = _read_rows(text)
    if not rows:
        report.error(1, "empty file: header row required")
        return [], report
    header = rows[0]
    normed = [_norm_header(h) for h in header]
    for key, label in (("coreid", "Core ID"), ("horizon", "Horizon")):
        if key not in normed:
            report.error(1, f"missing required column {label!r}")
    if report.errors:
        return [], report
    id_col = normed.index("coreid")
    hz_col = normed.index("horizon")
    param_cols = [
        (i, header[i].strip())
        for i, n in enumerate(normed)
        if i not in (id_col, hz_col) and header[i].strip()
    ]

    horizons: list[SampleHorizon] = []
    spans: dict[str, list[tuple[int, int, int]]] = {}
    for row_no, raw in enumerate(rows[1:], start=2):
        if not any(cell.strip() for cell in raw):
            continue
        cells = raw + [""] * (len(header) - len(raw))
        core_id = cells[id_col].strip()
        if not core_id:
            report.error(row_no, "empty Core ID")
            continue
        try:
            top, bottom = parse_horizon_label(cells[hz_col])
        except ValueError as e:
            report.error(row_no, str(e))
            continue

        clash = next(
            (
                s
                for s in spans.get(core_id, [])
                if top < s[1] and s[0] < bottom
            ),
            None,
        )
        if clash is not None:
            report.error(
                row_no,
                f"core {core_id}: horizon {top}-{bottom} cm overlaps "
                f"{clash[0]}-{clash[1]} cm (row {clash[2]})",
            )
            continue
        spans.setdefault(core_id, []).append((top, bottom, row_no))

        params: dict[str, float] = {}
        for i, name in param_cols:
            cell = cells[i].strip()
            if not cell:
                continue
            try:
                params[name] = float(cell)
            except ValueError:
                report.warn(
                    row_no, f"non-numeric value {cell!r} in parameter {name!r}"
                )
        if known_core_ids is not None and core_id not in known_core_ids:
            report.warn(row_no, f"horizon references unknown core {core_id!r}")
        horizons.append(
            SampleHorizon(core_id=core_id, top_cm=top, bottom_cm=bottom, params=params)
        )

    report.horizons_loaded = len(horizons)
    report.parameters_discovered = len(param_cols)
    return horizons, report


def load_map_manifest(
    text: str, manifest_dir: Path | str = "."
) -> tuple[list[MapLayer], IngestReport]:
    """Parse the JSON map manifest; image paths resolve against
    ``manifest_dir``. Entry numbers stand in for row numbers."""
    report = IngestReport()
    base = Path(manifest_dir)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        report.error(1, f"manifest is not valid JSON: {e}")
        return [], report
    entries = doc.get("layers")
    if not isinstance(entries, list):
        report.error(1, 'manifest must contain a "layers" array')
        return [], report

    layers: list[MapLayer] = []
    seen: set[str] = set()
    for n, entry in enumerate(entries, start=1):
        if not isinstance(entry, dict):
            report.error(n, "layer entry must be an object")
            continue
        missing = [
            k
            for k in ("id", "title", "image", "west", "east", "south", "north")
            if k not in entry
        ]
        if missing:
            report.error(n, f"layer missing keys: {', '.join(missing)}")
            continue
        layer_id = str(entry["id"])
        if layer_id in seen:
            report.error(n, f"duplicate layer id {layer_id!r}")
            return [], report
        seen.add(layer_id)

        kind = str(entry.get("kind", "other"))
        if kind not in ("bathymetry", "photomosaic", "backscatter", "lidar", "other"):
            report.warn(n, f"layer {layer_id}: unknown kind {kind!r}, using 'other'")
            kind = "other"
        try:
            bounds = GeoRect(
                west=float(entry["west"]),
                east=float(entry["east"]),
                south=float(entry["south"]),
                north=float(entry["north"]),
            )
        except (TypeError, ValueError) as e:
            report.error(n, f"layer {layer_id}: bad bounds: {e}")
            continue
        image = base / str(entry["image"])
        if not image.is_file():
            report.error(n, f"layer {layer_id}: image file not found: {image}")
            continue
        try:
            layer = MapLayer(
                layer_id=layer_id,
                title=str(entry["title"]),
                kind=kind,
                image_ref=str(image),
                bounds=bounds,
                native_resolution_cm=float(entry.get("native_resolution_cm", 0) or 0),
            )
        except ValueError as e:
            report.error(n, f"layer {layer_id}: {e}")
            continue
        layers.append(layer)
    return layers, report


def build_workspace(
    core_csv: str,
    sample_csv: str,
    manifest: str | None = None,
    manifest_dir: Path | str = ".",
    param_kinds: dict[str, str] | None = None,
) -> tuple[Catalog, IngestReport]:
    """Assemble a catalog snapshot from raw inputs.

    Parameter min/max are computed across all loaded horizons; kinds come
    from the optional ``param_kinds`` manifest, defaulting to 'unknown'.
    """
    report = IngestReport()
    cores, core_report = parse_core_csv(core_csv)
    report.merge(core_report, "cores.csv: ")

    horizons, sample_report = parse_sample_csv(
        sample_csv, known_core_ids={c.core_id for c in cores}
    )
    report.merge(sample_report, "samples.csv: ")

    layers: list[MapLayer] = []
    if manifest is not None:
        layers, map_report = load_map_manifest(manifest, manifest_dir)
        report.merge(map_report, "maps.json: ")

    param_kinds = param_kinds or {}
    discovered: dict[str, tuple[float | None, float | None]] = {}
    # Preserve column discovery order even for parameters with no values yet.
    for name in _sample_param_order(sample_csv):
        discovered[name] = (None, None)
    for h in horizons:
        for name, value in h.params.items():
            lo, hi = discovered.get(name, (None, None))
            discovered[name] = (
                value if lo is None else min(lo, value),
                value if hi is None else max(hi, value),
            )

    parameters = [
        ParameterInfo(
            name=name,
            kind=param_kinds.get(name, "unknown"),
            observed_min=lo,
            observed_max=hi,
        )
        for name, (lo, hi) in discovered.items()
    ]

    report.cores_loaded = core_report.cores_loaded
    report.horizons_loaded = sample_report.horizons_loaded
    report.parameters_discovered = len(parameters)

    snapshot = Catalog(cores, horizons, parameters, layers)
    return snapshot, report


def _sample_param_order(sample_csv: str) -> list[str]:
    rows = _read_rows(sample_csv)
    if not rows:
        return []
    header = rows[0]
    normed = [_norm_header(h) for h in header]
    return [
        header[i].strip()
        for i, n in enumerate(normed)
        if n not in ("coreid", "horizon") and header[i].strip()
    ]


# -- workspace directory layout ---------------------------------------------
#
#   workspace/
#     cores.csv        canonical core-level export
#     samples.csv      canonical sample-level export
#     maps.json        layer manifest, image paths relative to the workspace
#     images/*         map layer images (PNG)
#     parameters.json  optional parameter-kind manifest
#     annotations.json shared annotation log

def _fmt(value: float) -> str:
    # repr() is the shortest string that round-trips binary64 exactly.
    return repr(value)


def export_cores_csv(catalog: Catalog) -> str:
    extra_names: list[str] = []
    for core in catalog.cores:
        for name in core.extra_measurements:
            if name not in extra_names:
                extra_names.append(name)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["Core ID", "Location", "Date", "Core Fate", "Latitude", "Longitude"] + extra_names)
    for core in catalog.cores:
        row = [
            core.core_id,
            core.location_name,
            core.date.isoformat(),
            core.core_fate,
            _fmt(core.position.lat),
            _fmt(core.position.lon),
        ]
        for name in extra_names:
            v = core.extra_measurements.get(name)
            row.append("" if v is None else _fmt(v))
        w.writerow(row)
    return buf.getvalue()


def export_samples_csv(catalog: Catalog) -> str:
    params = [p.name for p in catalog.parameters]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["Core ID", "Horizon"] + params)
    for h in catalog.all_horizons():
        row = [h.core_id, h.label]
        for name in params:
            v = h.params.get(name)
            row.append("" if v is None else _fmt(v))
        w.writerow(row)
    return buf.getvalue()


def write_workspace(
    directory: Path | str,
    catalog: Catalog,
    param_kinds: dict[str, str] | None = None,
) -> Path:
    """Materialize the on-disk workspace layout from a catalog snapshot."""
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    (root / "cores.csv").write_text(export_cores_csv(catalog))
    (root / "samples.csv").write_text(export_samples_csv(catalog))

    images = root / "images"
    entries = []
    for layer in catalog.layers:
        images.mkdir(exist_ok=True)
        src = Path(layer.image_ref)
        dst = images / src.name
        if src.resolve() != dst.resolve():
            shutil.copyfile(src, dst)
        entries.append(
            {
                "id": layer.layer_id,
                "title": layer.title,
                "kind": layer.kind,
                "image": f"images/{src.name}",
                "west": layer.bounds.west,
                "east": layer.bounds.east,
                "south": layer.bounds.south,
                "north": layer.bounds.north,
                "native_resolution_cm": layer.native_resolution_cm,
            }
        )
    (root / "maps.json").write_text(json.dumps({"layers": entries}, indent=2))
    if param_kinds:
        (root / "parameters.json").write_text(json.dumps(param_kinds, indent=2))
    annotations = root / "annotations.json"
    if not annotations.exists():
        annotations.write_text(json.dumps({"applied": [], "undone": []}))
    return root


def load_workspace(directory: Path | str) -> tuple[Catalog, IngestReport]:
    """Load a workspace directory written by :func:`write_workspace`."""
    root = Path(directory)
    cores = root / "cores.csv"
    samples = root / "samples.csv"
    if not cores.is_file() or not samples.is_file():
        report = IngestReport()
        report.error(1, f"not a workspace: {root} lacks cores.csv/samples.csv")
        return Catalog([], [], [], []), report
    manifest = root / "maps.json"
    kinds_file = root / "parameters.json"
    param_kinds = None
    if kinds_file.is_file():
        param_kinds = {
            str(k): str(v) for k, v in json.loads(kinds_file.read_text()).items()
        }
    return build_workspace(
        cores.read_text(),
        samples.read_text(),
        manifest.read_text() if manifest.is_file() else None,
        manifest_dir=root,
        param_kinds=param_kinds,
    )
