import struct
import sys
import zlib
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


# Core-level fixture: the first two cores carry the reference measurement
# rows the rest of the suite asserts against; the others spread the site so
# linear interpolation has non-degenerate geometry.
CORES_CSV = """\
Core ID,Location,Date,Core Fate,Latitude,Longitude,Temperature
NA091_020,Auka - Matterhorn,11-01-17,Geochem,23.954198,-108.862394,3.1
S0193_PC5,Auka - Diane's vent,11-14-18,Geochem,23.954822,-108.863020,2.8
NA091_021,Auka - Matterhorn,11-01-17,Geochem,23.954305,-108.862710,3.4
S0193_PC8,Auka - Diane's vent,11-14-18,Geochem,23.954610,-108.862480,2.9
S0193_PC9,Auka - Diane's vent,11-15-18,Live,23.954415,-108.862905,
"""

SAMPLES_CSV = """\
Core ID,Horizon,Sulfate,Sulfide,Taxa 1,Taxa 2
NA091_020,0-1 cm,26.10,1.02,0.0071,0
NA091_020,1-2 cm,24.56,2.88,0.0480,0
NA091_020,2-3 cm,22.98,5.14,0.1358,0
NA091_020,3-4 cm,17.97,4.6,50.497,0
NA091_020,4-5 cm,13.21,6.02,61.204,0.004
S0193_PC5,0-1 cm,10.44,2.15,0.2210,31.0021
S0193_PC5,1-2 cm,8.85,3.78,0.4464,37.1574
S0193_PC5,2-5 cm,7.02,4.91,0.8013,40.332
NA091_021,0-3 cm,25.30,1.44,,0.002
NA091_021,3-6 cm,20.11,3.95,12.006,0.009
S0193_PC8,0-1 cm,11.87,1.88,0.1101,22.470
S0193_PC8,1-2 cm,9.93,3.02,0.3009,28.114
S0193_PC8,2-3 cm,8.10,4.27,0.7718,33.905
S0193_PC9,0-3 cm,,2.40,1.0226,18.225
"""

PARAM_KINDS = {
    "Sulfate": "geochemical",
    "Sulfide": "geochemical",
    "Taxa 1": "biological",
    "Taxa 2": "biological",
    "Temperature": "physicochemical",
}


def tiny_png(width=4, height=4, rgb=(30, 60, 120)) -> bytes:
    """Minimal valid RGB PNG, no external imaging dependency."""

    def chunk(kind: bytes, payload: bytes) -> bytes:
        return (
            struct.pack(">I", len(payload))
            + kind
            + payload
            + struct.pack(">I", zlib.crc32(kind + payload) & 0xFFFFFFFF)
        )

    header = struct.pack(">IIBBBBB", width, height, 8, 2, 0, 0, 0)
    row = b"\x00" + bytes(rgb) * width
    body = zlib.compress(row * height)
    return (
        b"\x89PNG\r\n\x1a\n"
        + chunk(b"IHDR", header)
        + chunk(b"IDAT", body)
        + chunk(b"IEND", b"")
    )


def write_fixture_inputs(root: Path) -> dict:
    """Write raw ingest inputs (CSVs, map manifest, images) under ``root``."""
    root.mkdir(parents=True, exist_ok=True)
    cores = root / "cores.csv"
    samples = root / "samples.csv"
    cores.write_text(CORES_CSV)
    samples.write_text(SAMPLES_CSV)

    (root / "bathy.png").write_bytes(tiny_png(rgb=(20, 40, 90)))
    (root / "mosaic.png").write_bytes(tiny_png(rgb=(120, 110, 90)))
    manifest = root / "maps.json"
    manifest.write_text(
        """
{
  "layers": [
    {"id": "bathy-5cm", "title": "Vent field bathymetry (5 cm)", "kind": "bathymetry",
     "image": "bathy.png", "west": -108.8650, "east": -108.8600,
     "south": 23.9530, "north": 23.9560, "native_resolution_cm": 5},
    {"id": "mosaic-5cm", "title": "Seafloor photomosaic (5 cm)", "kind": "photomosaic",
     "image": "mosaic.png", "west": -108.8650, "east": -108.8600,
     "south": 23.9530, "north": 23.9560, "native_resolution_cm": 5}
  ]
}
"""
    )
    import json

    kinds = root / "parameters.json"
    kinds.write_text(json.dumps(PARAM_KINDS, indent=2))
    return {
        "cores": cores,
        "samples": samples,
        "manifest": manifest,
        "param_kinds": kinds,
    }


@pytest.fixture()
def fixture_inputs(tmp_path):
    return write_fixture_inputs(tmp_path / "inputs")


@pytest.fixture()
def catalog(fixture_inputs):
    from seacore.ingest import build_workspace

    snapshot, report = build_workspace(
        fixture_inputs["cores"].read_text(),
        fixture_inputs["samples"].read_text(),
        fixture_inputs["manifest"].read_text(),
        manifest_dir=fixture_inputs["manifest"].parent,
        param_kinds=PARAM_KINDS,
    )
    assert not report.errors, report.errors
    return snapshot


@pytest.fixture()
def workspace_dir(tmp_path, fixture_inputs):
    from seacore.ingest import build_workspace, write_workspace

    snapshot, report = build_workspace(
        fixture_inputs["cores"].read_text(),
        fixture_inputs["samples"].read_text(),
        fixture_inputs["manifest"].read_text(),
        manifest_dir=fixture_inputs["manifest"].parent,
        param_kinds=PARAM_KINDS,
    )
    assert not report.errors
    out = tmp_path / "workspace"
    write_workspace(out, snapshot, param_kinds=PARAM_KINDS)
    return out
