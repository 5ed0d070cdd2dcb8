"""Service <-> built viewer integration (skipped until `frontend` is built)."""

from pathlib import Path

import numpy as np
import pytest
from fastapi.testclient import TestClient

from soundplot.audio_io import AudioBuffer, save_wav
from soundplot.service import create_app

FRONTEND = Path(__file__).parent.parent / "frontend"

pytestmark = pytest.mark.skipif(
    not (FRONTEND / "dist" / "main.js").is_file(),
    reason="viewer not built (cd frontend && npm install && npm run build)",
)


@pytest.fixture(scope="module")
def client(tmp_path_factory):
    data_dir = tmp_path_factory.mktemp("viewer-data")
    app = create_app(data_dir=data_dir, frontend_dir=FRONTEND)
    with TestClient(app) as c:
        yield c


def test_index_served(client):
    resp = client.get("/")
    assert resp.status_code == 200
    assert 'canvas id="stage"' in resp.text
    assert "importmap" in resp.text


def test_compiled_modules_served(client):
    for path in ("/dist/main.js", "/dist/viewer.js", "/dist/logic.js"):
        resp = client.get(path)
        assert resp.status_code == 200, path
        assert len(resp.content) > 0


def test_three_module_reachable_via_import_map(client):
    resp = client.get("/node_modules/three/build/three.module.js")
    assert resp.status_code == 200
    resp = client.get(
        "/node_modules/three/examples/jsm/controls/OrbitControls.js"
    )
    assert resp.status_code == 200


def test_full_session_artifacts_resolve_for_viewer(client, tmp_path):
    rate = 22050
    n = np.arange(int(0.5 * rate))
    t = n / rate
    x = 0.8 * np.sin(2 * np.pi * (1500 * t + 600 * t**2)) * np.hanning(n.shape[0])
    wav = tmp_path / "robin.wav"
    save_wav(wav, AudioBuffer(x, rate))
    resp = client.post(
        "/api/analyze",
        files={"file": ("robin.wav", wav.read_bytes(), "audio/wav")},
        data={"gl_iterations": "2"},
    )
    assert resp.status_code == 200, resp.text
    folder = resp.json()["folder"]
    # every URL the viewer will request must resolve
    for name in (
        "metadata.json",
        "trajectory_original.json",
        "trajectory_synthesized.json",
        "original.wav",
        "synthesized.wav",
    ):
        assert client.get(f"/sessions/{folder}/{name}").status_code == 200, name
