"""On-disk session bundles: one folder per analysis run.

A session holds the processed input, the reconstruction, both figures, the
two viewer trajectories, and metadata.json tying them together.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .audio_io import AudioBuffer, save_wav
from .figures import RasterImage
from .metrics import QualityMetrics
from .trajectory import Trajectory3D

SESSION_FILES = {
    "original_wav": "original.wav",
    "synthesized_wav": "synthesized.wav",
    "comparison_png": "comparison.png",
    "analysis_png": "analysis.png",
    "metadata_json": "metadata.json",
    "trajectory_original_json": "trajectory_original.json",
    "trajectory_synthesized_json": "trajectory_synthesized.json",
}


class CollisionError(Exception):
    """Could not find an unused session id."""


@dataclass
class SessionRecord:
    session_id: str
    audio_name: str
    created_at: str
    parameters: dict
    metrics: QualityMetrics
    files: dict
    folder: Path


def sanitize_name(stem: str) -> str:
    """Keep letters, digits, dash, underscore; everything else becomes '_'."""
    cleaned = re.sub(r"[^A-Za-z0-9_-]+", "_", stem).strip("_")
    return cleaned or "audio"


def metadata_dict(record: SessionRecord) -> dict:
    return {
        "session_id": record.session_id,
        "audio_name": record.audio_name,
        "created_at": record.created_at,
        "parameters": record.parameters,
        "metrics": {
            "snr_db": record.metrics.snr_db,
            "waveform_corr": record.metrics.waveform_corr,
            "spectral_corr": record.metrics.spectral_corr,
            "mel_corr": record.metrics.mel_corr,
        },
        "files": record.files,
    }


def create_session(
    out_root: str | Path,
    source_name: str,
    original: AudioBuffer,
    synthesized: AudioBuffer,
    trajectory_original: Trajectory3D,
    trajectory_synthesized: Trajectory3D,
    comparison: RasterImage,
    analysis: RasterImage,
    metrics: QualityMetrics,
    parameters: dict,
    rng: random.Random | None = None,
) -> SessionRecord:
    """Write all seven session artifacts under {audio_name}_{session_id}/."""
    rng = rng or random.Random()
    out_root = Path(out_root)
    out_root.mkdir(parents=True, exist_ok=True)
    audio_name = sanitize_name(source_name)

    folder = None
    session_id = ""
    for _ in range(5):
        session_id = f"{rng.getrandbits(32):08x}"
        candidate = out_root / f"{audio_name}_{session_id}"
        if not candidate.exists():
            folder = candidate
            break
    if folder is None:
        raise CollisionError(f"no free session id under {out_root} for {audio_name}")
    folder.mkdir()

    record = SessionRecord(
        session_id=session_id,
        audio_name=audio_name,
        created_at=datetime.now(timezone.utc).isoformat(),
        parameters=parameters,
        metrics=metrics,
        files=dict(SESSION_FILES),
        folder=folder,
    )

    save_wav(folder / SESSION_FILES["original_wav"], original)
    save_wav(folder / SESSION_FILES["synthesized_wav"], synthesized)
    comparison.save(folder / SESSION_FILES["comparison_png"])
    analysis.save(folder / SESSION_FILES["analysis_png"])
    _write_json(
        folder / SESSION_FILES["trajectory_original_json"],
        trajectory_original.to_json_dict(SESSION_FILES["original_wav"]),
    )
    _write_json(
        folder / SESSION_FILES["trajectory_synthesized_json"],
        trajectory_synthesized.to_json_dict(SESSION_FILES["synthesized_wav"]),
    )
    _write_json(folder / SESSION_FILES["metadata_json"], metadata_dict(record))
    return record


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")


def read_metadata(folder: str | Path) -> dict:
    return json.loads((Path(folder) / "metadata.json").read_text(encoding="utf-8"))


def list_sessions(out_root: str | Path) -> list[dict]:
    """Metadata of every completed session under the root, newest first."""
    root = Path(out_root)
    if not root.is_dir():
        return []
    out = []
    for meta_path in sorted(root.glob("*/metadata.json")):
        try:
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            continue
        meta["folder"] = meta_path.parent.name
        out.append(meta)
    out.sort(key=lambda m: m.get("created_at", ""), reverse=True)
    return out
