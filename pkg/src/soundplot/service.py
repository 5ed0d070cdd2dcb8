"""HTTP service: upload-and-analyze endpoint plus session browsing.

Wraps the same pipeline the CLI uses. Session artifacts are served statically
under /sessions/ for the browser viewer; a built viewer directory, when
present, is mounted at the root.
"""

from __future__ import annotations

import shutil
import tempfile
from pathlib import Path

from fastapi import FastAPI, File, Form, HTTPException, UploadFile
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import __version__
from .audio_io import CorruptHeaderError, EmptyAudioError, UnsupportedFormatError
from .pipeline import AnalysisOptions, analyze_file
from .session import list_sessions, read_metadata

DEFAULT_DATA_DIR = Path("data/sessions")

_FALLBACK_PAGE = """<!doctype html>
<html><head><title>soundplot</title></head>
<body>
<h1>soundplot service</h1>
<p>The viewer frontend is not built. API endpoints:</p>
<ul>
<li>GET /api/health</li>
<li>GET /api/sessions</li>
<li>GET /api/sessions/{folder}</li>
<li>POST /api/analyze (multipart WAV upload)</li>
</ul>
</body></html>"""


class HealthResponse(BaseModel):
    status: str
    version: str


class MetricsResponse(BaseModel):
    snr_db: float
    waveform_corr: float
    spectral_corr: float
    mel_corr: float


class SessionResponse(BaseModel):
    session_id: str
    audio_name: str
    folder: str
    created_at: str
    metrics: MetricsResponse
    files: dict[str, str]
    parameters: dict


class SessionSummary(BaseModel):
    session_id: str
    audio_name: str
    folder: str
    created_at: str
    metrics: MetricsResponse


class SessionListResponse(BaseModel):
    sessions: list[SessionSummary]


def create_app(data_dir: str | Path | None = None, frontend_dir: str | Path | None = None) -> FastAPI:
    data_dir = Path(data_dir) if data_dir else DEFAULT_DATA_DIR
    data_dir.mkdir(parents=True, exist_ok=True)
    app = FastAPI(title="soundplot", version=__version__)

    @app.get("/api/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.get("/api/sessions", response_model=SessionListResponse)
    def sessions() -> SessionListResponse:
        summaries = [
            SessionSummary(
                session_id=meta["session_id"],
                audio_name=meta["audio_name"],
                folder=meta["folder"],
                created_at=meta["created_at"],
                metrics=MetricsResponse(**meta["metrics"]),
            )
            for meta in list_sessions(data_dir)
        ]
        return SessionListResponse(sessions=summaries)

    @app.get("/api/sessions/{folder}", response_model=SessionResponse)
    def session_detail(folder: str) -> SessionResponse:
        target = data_dir / folder
        if "/" in folder or not (target / "metadata.json").is_file():
            raise HTTPException(status_code=404, detail=f"no session named {folder}")
        meta = read_metadata(target)
        return SessionResponse(
            session_id=meta["session_id"],
            audio_name=meta["audio_name"],
            folder=folder,
            created_at=meta["created_at"],
            metrics=MetricsResponse(**meta["metrics"]),
            files=meta["files"],
            parameters=meta["parameters"],
        )

    @app.post("/api/analyze", response_model=SessionResponse)
    def analyze(
        file: UploadFile = File(...),
        gl_iterations: int = Form(32),
        f_min: float = Form(65.0),
        f_max: float = Form(2093.0),
        trim: bool = Form(True),
        remove_silence: bool = Form(False),
        seed: int | None = Form(None),
    ) -> SessionResponse:
        options = AnalysisOptions(
            out_dir=data_dir,
            trim=trim,
            remove_silence=remove_silence,
            gl_iterations=gl_iterations,
            f_min=f_min,
            f_max=f_max,
            seed=seed,
        )
        suffix = Path(file.filename or "upload.wav").name
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / suffix
            with target.open("wb") as out:
                shutil.copyfileobj(file.file, out)
            try:
                record = analyze_file(target, options)
            except (UnsupportedFormatError, CorruptHeaderError, EmptyAudioError) as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
        return SessionResponse(
            session_id=record.session_id,
            audio_name=record.audio_name,
            folder=record.folder.name,
            created_at=record.created_at,
            metrics=MetricsResponse(
                snr_db=record.metrics.snr_db,
                waveform_corr=record.metrics.waveform_corr,
                spectral_corr=record.metrics.spectral_corr,
                mel_corr=record.metrics.mel_corr,
            ),
            files=record.files,
            parameters=record.parameters,
        )

    app.mount("/sessions", StaticFiles(directory=data_dir), name="sessions")

    frontend = Path(frontend_dir) if frontend_dir else Path("frontend")
    if (frontend / "index.html").is_file():
        app.mount("/", StaticFiles(directory=frontend, html=True), name="viewer")
    else:

        @app.get("/", response_class=HTMLResponse)
        def index() -> str:
            return _FALLBACK_PAGE

    return app
