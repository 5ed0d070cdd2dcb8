"""The five-stage analysis run: load, preprocess, extract, synthesize, export.

One call produces a complete session folder; the CLI and the HTTP service
both come through here.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .audio_io import (
    TARGET_RATE,
    AllSilentError,
    AudioBuffer,
    PreprocessConfig,
    load_wav,
    normalize,
    remove_silence,
    resample,
    to_mono,
    trim_duration,
)
from .embedding import joint_embedding
from .figures import render_comparison, render_embedding
from .metrics import compute_all
from .pitch import PitchConfig, track_pitch
from .session import SessionRecord, create_session
from .spectral import (
    StftConfig,
    build_mel_filterbank,
    magnitude,
    mel_spectrogram,
    mfcc,
    rms_energy,
    spectral_bandwidth,
    spectral_centroid,
    stft,
)
from .synthesis import SynthesisConfig, synthesize
from .trajectory import Trajectory3D, build_trajectory, fill_unvoiced


@dataclass
class AnalysisOptions:
    out_dir: str | Path = Path("data/sessions")
    trim: bool = True
    max_duration_s: float = 300.0
    remove_silence: bool = False
    silence_floor_db: float = 60.0
    gl_iterations: int = 32
    f_min: float = 65.0
    f_max: float = 2093.0
    seed: int | None = None
    mel_bands: int = 128


@dataclass
class StreamAnalysis:
    """Everything extracted from one audio stream."""

    buffer: AudioBuffer
    power: np.ndarray  # (bins, frames), for the comparison heatmaps
    mel_power: np.ndarray
    mfcc_values: np.ndarray
    trajectory: Trajectory3D


def _analyze_stream(buffer, stft_cfg, fb, pitch_cfg) -> StreamAnalysis:
    mag = magnitude(stft(buffer, stft_cfg))
    mel = mel_spectrogram(mag, fb)
    centroid = spectral_centroid(mag)
    bandwidth = spectral_bandwidth(mag)
    energy = rms_energy(mag)
    coeffs = mfcc(mel)
    track = track_pitch(buffer, pitch_cfg)
    filled = fill_unvoiced(track, pitch_cfg.f_min)
    trajectory = build_trajectory(
        centroid,
        bandwidth,
        filled,
        energy,
        pitch_track=track,
        sample_rate=buffer.sample_rate,
        hop=stft_cfg.hop,
    )
    return StreamAnalysis(buffer, mag.values**2, mel.values, coeffs.values, trajectory)


def preprocess_input(raw: AudioBuffer, options: AnalysisOptions) -> AudioBuffer:
    buf = to_mono(raw)
    buf = resample(buf, TARGET_RATE)
    if options.trim:
        buf = trim_duration(buf, options.max_duration_s)
    if options.remove_silence:
        try:
            buf = remove_silence(
                buf,
                PreprocessConfig(
                    max_duration_s=options.max_duration_s,
                    remove_silence=True,
                    silence_floor_db=options.silence_floor_db,
                ),
            )
        except AllSilentError:
            pass  # keep the original rather than failing the run
    return normalize(buf)


def effective_parameters(options: AnalysisOptions, stft_cfg, pitch_cfg, synth_cfg, fb) -> dict:
    return {
        "sample_rate": TARGET_RATE,
        "win_size": stft_cfg.win_size,
        "hop": stft_cfg.hop,
        "mel_bands": fb.band_count,
        "mel_f_min": fb.f_min,
        "mel_f_max": fb.f_max,
        "gl_iterations": synth_cfg.gl_iterations,
        "pinv_rcond": synth_cfg.pinv_rcond,
        "phase_epsilon": synth_cfg.phase_epsilon,
        "pitch_f_min": pitch_cfg.f_min,
        "pitch_f_max": pitch_cfg.f_max,
        "threshold_count": pitch_cfg.threshold_count,
        "beta_a": pitch_cfg.beta_a,
        "beta_b": pitch_cfg.beta_b,
        "bins_per_semitone": pitch_cfg.bins_per_semitone,
        "switch_prob": pitch_cfg.switch_prob,
        "max_semitones_per_frame": pitch_cfg.max_semitones_per_frame,
        "no_trough_prob": pitch_cfg.no_trough_prob,
        "trim": options.trim,
        "max_duration_s": options.max_duration_s,
        "remove_silence": options.remove_silence,
        "silence_floor_db": options.silence_floor_db,
        "seed": options.seed,
    }


def analyze_file(input_path: str | Path, options: AnalysisOptions | None = None) -> SessionRecord:
    """Run the whole pipeline on one WAV and write a session folder."""
    options = options or AnalysisOptions()
    stft_cfg = StftConfig()
    synth_cfg = SynthesisConfig(gl_iterations=options.gl_iterations)
    pitch_cfg = PitchConfig(f_min=options.f_min, f_max=options.f_max, stft=stft_cfg)
    fb = build_mel_filterbank(options.mel_bands, stft_cfg.bin_count, TARGET_RATE)

    raw = load_wav(input_path)
    processed = preprocess_input(raw, options)

    original = _analyze_stream(processed, stft_cfg, fb, pitch_cfg)
    synth_buf = synthesize(processed, stft_cfg, synth_cfg, fb)
    synthesized = _analyze_stream(synth_buf, stft_cfg, fb, pitch_cfg)

    metrics = compute_all(processed, synth_buf, stft_cfg, fb)
    _, embedding = joint_embedding(original.mfcc_values, synthesized.mfcc_values)

    comparison = render_comparison(
        processed,
        synth_buf,
        original.power,
        synthesized.power,
        original.mel_power,
        synthesized.mel_power,
        metrics,
    )
    analysis_fig = render_embedding(embedding)

    rng = random.Random(options.seed)
    return create_session(
        options.out_dir,
        raw.source_name or Path(str(input_path)).stem,
        processed,
        synth_buf,
        original.trajectory,
        synthesized.trajectory,
        comparison,
        analysis_fig,
        metrics,
        effective_parameters(options, stft_cfg, pitch_cfg, synth_cfg, fb),
        rng,
    )
