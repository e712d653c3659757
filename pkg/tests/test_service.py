import json
import time

import pytest
from fastapi.testclient import TestClient

from seacore.service import create_app


@pytest.fixture()
def client(workspace_dir):
    app = create_app(workspace_dir)
    with TestClient(app) as c:
        yield c


def wait_for_job(client, job_id, timeout=30.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        doc = client.get(f"/api/interpolations/{job_id}").json()
        if doc["status"] in ("done", "failed"):
            return doc
        time.sleep(0.02)
    raise TimeoutError(f"job {job_id} did not finish")


def submit(client, **overrides):
    body = {
        "method": "sibson",
        "parameter": "Sulfide",
        "cell_xy_cm": 77,
        "core_ids": ["NA091_020", "S0193_PC5", "NA091_021", "S0193_PC8"],
        "padding_cells": 0,
        "vsup": {"layers": 4, "branching": 2},
    }
    body.update(overrides)
    return client.post("/api/interpolations", json=body)


class TestCatalogEndpoints:
    def test_workspace_summary(self, client):
        doc = client.get("/api/workspace").json()
        assert doc["cores"] == 5
        assert doc["maps"] == 2
        assert doc["date_range"]["from"] == "2017-11-01"
        assert doc["date_range"]["to"] == "2018-11-15"
        assert "Auka - Matterhorn" in doc["locations"]

    def test_cores_filter_by_fate(self, client):
        got = client.get("/api/cores", params={"fate": "Geochem"}).json()
        ids = [c["core_id"] for c in got]
        assert "NA091_020" in ids
        assert "S0193_PC9" not in ids

    def test_cores_filter_by_date_range(self, client):
        got = client.get("/api/cores", params={"from": "2018-01-01"}).json()
        assert all(c["date"] >= "2018-01-01" for c in got)
        assert {c["core_id"] for c in got} == {"S0193_PC5", "S0193_PC8", "S0193_PC9"}

    def test_cores_bad_date(self, client):
        r = client.get("/api/cores", params={"from": "lately"})
        assert r.status_code == 400
        assert "code" in r.json()

    def test_horizons_raw(self, client):
        doc = client.get("/api/cores/NA091_020/horizons").json()
        assert doc["horizons"][2]["label"] == "2-3 cm"
        assert doc["horizons"][2]["params"]["Sulfate"] == 22.98

    def test_horizons_resampled(self, client):
        doc = client.get(
            "/api/cores/NA091_021/horizons", params={"parameter": "Sulfate"}
        ).json()
        assert doc["step_cm"] == 3
        assert [e["depth_cm"] for e in doc["entries"]] == [0, 3]

    def test_horizons_resampled_with_step_override(self, client):
        doc = client.get(
            "/api/cores/NA091_021/horizons",
            params={"parameter": "Sulfate", "step": 1},
        ).json()
        entries = doc["entries"]
        assert len(entries) == 6
        assert [e["horizon_label"] for e in entries[:3]] == ["0-3 cm"] * 3
        assert len({e["value"] for e in entries[:3]}) == 1

    def test_horizons_unknown_core_404(self, client):
        r = client.get("/api/cores/nope/horizons")
        assert r.status_code == 404
        assert r.json()["code"] == "not-found"

    def test_parameters(self, client):
        params = {p["name"]: p for p in client.get("/api/parameters").json()}
        assert params["Sulfide"]["kind"] == "geochemical"
        assert params["Sulfate"]["observed_max"] == 26.10

    def test_maps_and_image(self, client):
        maps = client.get("/api/maps").json()
        assert {m["id"] for m in maps} == {"bathy-5cm", "mosaic-5cm"}
        img = client.get("/api/maps/bathy-5cm/image")
        assert img.status_code == 200
        assert img.headers["content-type"] == "image/png"
        assert img.content.startswith(b"\x89PNG")

    def test_unknown_map_404(self, client):
        assert client.get("/api/maps/nope/image").status_code == 404


class TestInterpolationJobs:
    def test_sibson_77_job_completes(self, client):
        r = submit(client)
        assert r.status_code == 200
        job_id = r.json()["job_id"]
        doc = wait_for_job(client, job_id)
        assert doc["status"] == "done"
        grid = doc["result"]["grid"]
        assert grid["parameter"] == "Sulfide"
        assert grid["method"] == "sibson"
        assert grid["cell_xy_cm"] == 77
        assert len(grid["values"]) == grid["nx"] * grid["ny"] * grid["nz"]
        vsup = doc["result"]["vsup"]
        assert len(vsup["layer"]) == len(grid["values"])
        assert vsup["quantizer"] == {"layers": 4, "branching": 2}

    def test_identical_requests_share_job_and_result(self, client):
        a = submit(client).json()["job_id"]
        b = submit(client).json()["job_id"]
        assert a == b
        doc1 = wait_for_job(client, a)
        doc2 = client.get(f"/api/interpolations/{a}").json()
        assert json.dumps(doc1["result"], sort_keys=True) == json.dumps(
            doc2["result"], sort_keys=True
        )

    def test_linear_job(self, client):
        r = submit(client, method="linear")
        assert r.status_code == 200
        doc = wait_for_job(client, r.json()["job_id"])
        assert doc["status"] == "done"
        assert None in doc["result"]["grid"]["values"] or all(
            v is not None for v in doc["result"]["grid"]["values"]
        )

    def test_degenerate_linear_409_with_hint(self, client):
        r = submit(client, method="linear", core_ids=["NA091_020", "S0193_PC5"])
        assert r.status_code == 409
        body = r.json()
        assert body["code"] == "degenerate-geometry"
        assert body["hint"] == "use sibson"

    def test_non_multiple_of_seven_400(self, client):
        r = submit(client, cell_xy_cm=10)
        assert r.status_code == 400
        assert r.json()["code"] == "invalid-grid"

    def test_grid_too_large_422_carries_count(self, workspace_dir):
        app = create_app(workspace_dir, voxel_cap=50)
        with TestClient(app) as small:
            r = submit(small)
            assert r.status_code == 422
            body = r.json()
            assert body["code"] == "grid-too-large"
            assert body["voxel_count"] > 50

    def test_unknown_core_404(self, client):
        r = submit(client, core_ids=["NA091_020", "ghost"])
        assert r.status_code == 404

    def test_unknown_parameter_404(self, client):
        r = submit(client, parameter="Unobtainium")
        assert r.status_code == 404

    def test_bad_method_400(self, client):
        r = submit(client, method="kriging")
        assert r.status_code == 400
        assert r.json()["code"] == "bad-method"

    def test_unknown_job_404(self, client):
        assert client.get("/api/interpolations/int-doesnotexist").status_code == 404

    def test_job_lists_request_echo(self, client):
        job_id = submit(client).json()["job_id"]
        doc = client.get(f"/api/interpolations/{job_id}").json()
        assert doc["request"]["parameter"] == "Sulfide"
        assert doc["request"]["cell_xy_cm"] == 77


class TestVirtualCore:
    def test_export_inside_grid(self, client):
        job_id = submit(client).json()["job_id"]
        wait_for_job(client, job_id)
        cores = client.get("/api/cores").json()
        target = next(c for c in cores if c["core_id"] == "NA091_020")
        r = client.post(
            "/api/virtual-core",
            json={"job_id": job_id, "lat": target["lat"], "lon": target["lon"]},
        )
        assert r.status_code == 200
        doc = r.json()
        assert doc["parameter"] == "Sulfide"
        assert [h["top_cm"] for h in doc["horizons"]] == list(
            range(len(doc["horizons"]))
        )
        assert all(h["bottom_cm"] == h["top_cm"] + 1 for h in doc["horizons"])

    def test_outside_grid_is_400_out_of_bounds(self, client):
        job_id = submit(client).json()["job_id"]
        wait_for_job(client, job_id)
        r = client.post(
            "/api/virtual-core", json={"job_id": job_id, "lat": 0.0, "lon": 0.0}
        )
        assert r.status_code == 400
        assert r.json()["code"] == "out-of-bounds"

    def test_unknown_job(self, client):
        r = client.post(
            "/api/virtual-core", json={"job_id": "int-ghost", "lat": 0, "lon": 0}
        )
        assert r.status_code == 404


class TestAnnotations:
    def stroke_body(self, note=None):
        return {
            "color_index": 2,
            "path": [
                {"lat": 23.9541, "lon": -108.8625},
                {"lat": 23.9542, "lon": -108.8626},
            ],
            "note": note,
        }

    def test_add_get_undo_redo(self, client):
        r = client.post("/api/annotations/strokes", json=self.stroke_body("mat"))
        assert r.status_code == 200
        doc = client.get("/api/annotations").json()
        assert len(doc["applied"]) == 1
        assert doc["applied"][0]["note"] == "mat"

        assert client.post("/api/annotations/undo").json() == {
            "applied": 0,
            "undone": 1,
        }
        assert client.post("/api/annotations/redo").json() == {
            "applied": 1,
            "undone": 0,
        }

    def test_persisted_across_service_restarts(self, workspace_dir):
        with TestClient(create_app(workspace_dir)) as c1:
            c1.post("/api/annotations/strokes", json=self.stroke_body("first"))
            c1.post("/api/annotations/strokes", json=self.stroke_body("second"))
            c1.post("/api/annotations/undo")
        with TestClient(create_app(workspace_dir)) as c2:
            doc = c2.get("/api/annotations").json()
            assert [s["note"] for s in doc["applied"]] == ["first"]
            assert [s["note"] for s in doc["undone"]] == ["second"]

    def test_bad_stroke_400(self, client):
        r = client.post(
            "/api/annotations/strokes",
            json={"color_index": 9, "path": [{"lat": 0, "lon": 0}] * 2},
        )
        assert r.status_code == 400
        assert r.json()["code"] == "bad-stroke"


class TestStaticAssets:
    def test_index_served(self, client):
        r = client.get("/")
        assert r.status_code == 200
        assert "text/html" in r.headers["content-type"]

    def test_reserved_ingest_endpoint(self, client):
        assert client.post("/api/ingest").status_code == 501
