import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from lvc import npyio
from lvc.service import app


@pytest.fixture
def client():
    with TestClient(app, raise_server_exceptions=False) as c:
        yield c


@pytest.fixture
def npy_inputs(tmp_path):
    rng = np.random.default_rng(0)
    f = tmp_path / "f.npy"
    q = tmp_path / "q.npy"
    npyio.write_npy(f, rng.standard_normal((256, 8)).astype(np.float32))
    npyio.write_npy(q, rng.standard_normal((3, 8)).astype(np.float32))
    return f, q


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_compress_endpoint(client, npy_inputs, tmp_path):
    f, q = npy_inputs
    resp = client.post("/compress", json={
        "features_path": str(f), "query_path": str(q),
        "tokens_per_frame": 4, "pseudo_frames": 16,
        "out_path": str(tmp_path / "o.npy")})
    assert resp.status_code == 200
    body = resp.json()
    assert body["output_shape"] == [64, 8]
    assert npyio.read_npy(tmp_path / "o.npy").shape == (64, 8)


def test_validation_error_maps_to_422(client, npy_inputs, tmp_path):
    f, q = npy_inputs
    resp = client.post("/compress", json={
        "features_path": str(f), "query_path": str(q),
        "tokens_per_frame": 4, "pseudo_frames": 7,
        "out_path": str(tmp_path / "o.npy")})
    assert resp.status_code == 422
    assert resp.json()["error"] == "IndivisibleFrames"


def test_io_error_maps_to_500(client, tmp_path):
    resp = client.post("/compress", json={
        "features_path": str(tmp_path / "missing.npy"),
        "query_path": None, "tokens_per_frame": 4, "pseudo_frames": 16,
        "mode": "avg-pool", "out_path": str(tmp_path / "o.npy")})
    assert resp.status_code == 500
    assert resp.json()["error"] == "IoFailure"


def test_sample_indices_endpoint(client):
    resp = client.post("/sample-indices",
                       json={"total_frames": 128, "frames": 64})
    assert resp.status_code == 200
    assert resp.json()["indices"] == list(range(1, 128, 2))


def test_synth_eval_endpoint_writes_report(client, tmp_path):
    report_path = tmp_path / "r.json"
    resp = client.post("/synth-eval", json={
        "trials": 10, "seed": 4, "report_path": str(report_path)})
    assert resp.status_code == 200
    assert json.loads(report_path.read_text("utf-8")) == resp.json()


def test_bench_endpoint(client):
    resp = client.post("/bench", json={
        "sizes": ["16x2x8"], "repetitions": 2, "pseudo_frames": 4})
    assert resp.status_code == 200
    assert resp.json()["sizes"][0]["size"] == "16x2x8"
