"""Mel-spectrogram inversion and Griffin-Lim phase reconstruction.

The analysis-synthesis loop: project the power spectrum onto the mel bands,
estimate a linear magnitude back through the filterbank pseudo-inverse, then
recover phase by alternating ISTFT/STFT with magnitude replacement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft

from .audio_io import AudioBuffer, normalize
from .spectral import (
    MagnitudeSpectrogram,
    MelFilterbank,
    MelSpectrogram,
    NonColaConfigError,
    StftConfig,
    build_mel_filterbank,
    hann_window,
    magnitude,
    mel_spectrogram,
    stft,
)


class ShapeMismatchError(Exception):
    """Mel band count does not match the filterbank."""


@dataclass(frozen=True)
class SynthesisConfig:
    gl_iterations: int = 32
    pinv_rcond: float = 1e-8
    phase_epsilon: float = 1e-12

    def __post_init__(self) -> None:
        if self.gl_iterations < 1:
            raise ValueError("gl_iterations must be >= 1")


def mel_pseudo_inverse(fb: MelFilterbank, rcond: float = 1e-8) -> np.ndarray:
    """Moore-Penrose inverse of the filterbank via SVD with a relative cutoff.

    The normal-equation form is numerically singular at 128 bands over 1025
    bins; the SVD route realizes the same operator stably.
    """
    return np.linalg.pinv(fb.weights, rcond=rcond)


def mel_to_linear(
    mel: MelSpectrogram, fb: MelFilterbank, config: SynthesisConfig | None = None
) -> MagnitudeSpectrogram:
    """Least-squares linear magnitude estimate from mel power.

    The pseudo-inverse can produce small negative powers outside the
    filterbank row space; those clamp to zero before the square root.
    """
    config = config or SynthesisConfig()
    if mel.values.shape[0] != fb.weights.shape[0]:
        raise ShapeMismatchError(
            f"mel has {mel.values.shape[0]} bands, filterbank has {fb.weights.shape[0]}"
        )
    power = mel_pseudo_inverse(fb, config.pinv_rcond) @ mel.values
    values = np.sqrt(np.maximum(power, 0.0))
    return MagnitudeSpectrogram(values, mel.sample_rate, mel.config)


def spectral_convergence(estimate: MagnitudeSpectrogram, target: MagnitudeSpectrogram) -> float:
    """Frobenius distance between magnitudes, relative to the target norm."""
    denom = np.linalg.norm(target.values)
    if denom == 0.0:
        return 0.0
    return float(np.linalg.norm(estimate.values - target.values) / denom)


def _frames_to_signal(spec_values: np.ndarray, window: np.ndarray, hop: int) -> np.ndarray:
    """Least-squares overlap-add over the padded frame grid (no cropping)."""
    win = window.shape[0]
    frames = scipy.fft.irfft(spec_values.T, n=win, axis=1) * window
    total = (frames.shape[0] - 1) * hop + win
    acc = np.zeros(total)
    wsum = np.zeros(total)
    wsq = window**2
    for m in range(frames.shape[0]):
        acc[m * hop : m * hop + win] += frames[m]
        wsum[m * hop : m * hop + win] += wsq
    return np.where(wsum > 1e-12, acc / np.where(wsum > 0, wsum, 1.0), 0.0)


def _signal_to_frames(padded: np.ndarray, window: np.ndarray, hop: int, n_frames: int) -> np.ndarray:
    win = window.shape[0]
    frames = np.lib.stride_tricks.sliding_window_view(padded, win)[::hop][:n_frames]
    return scipy.fft.rfft(frames * window, axis=1).T


def griffin_lim_history(
    target_mag: MagnitudeSpectrogram, config: SynthesisConfig | None = None
) -> tuple[AudioBuffer, np.ndarray]:
    """Griffin-Lim returning the signal plus per-iteration convergence error.

    Zero-phase start; each pass runs ISTFT then STFT and re-imposes the target
    magnitude. The loop alternates in the padded frame domain so the two
    transforms are exact least-squares adjoints (re-padding each pass would
    inject edge artifacts every iteration); the final signal is cropped to the
    centered-frame convention and peak-normalized.
    """
    config = config or SynthesisConfig()
    target = target_mag.values
    stft_config = target_mag.config
    if not stft_config.is_cola():
        raise NonColaConfigError(
            f"win={stft_config.win_size} hop={stft_config.hop} violates overlap-add"
        )
    win, hop = stft_config.win_size, stft_config.hop
    window = hann_window(win)
    n_frames = target.shape[1]
    target_norm = np.linalg.norm(target)

    estimate = target.astype(complex)
    history = np.empty(config.gl_iterations)
    padded = np.zeros((n_frames - 1) * hop + win)
    for i in range(config.gl_iterations):
        padded = _frames_to_signal(estimate, window, hop)
        rebuilt = _signal_to_frames(padded, window, hop, n_frames)
        mags = np.abs(rebuilt)
        history[i] = (
            float(np.linalg.norm(mags - target) / target_norm) if target_norm else 0.0
        )
        estimate = target * rebuilt / (mags + config.phase_epsilon)
    signal = padded[win // 2 : win // 2 + (n_frames - 1) * hop]
    out = AudioBuffer(signal, target_mag.sample_rate)
    return (normalize(out) if signal.size else out), history


def griffin_lim(
    target_mag: MagnitudeSpectrogram, config: SynthesisConfig | None = None
) -> AudioBuffer:
    audio, _ = griffin_lim_history(target_mag, config)
    return audio


def synthesize(
    audio: AudioBuffer,
    stft_config: StftConfig | None = None,
    synthesis_config: SynthesisConfig | None = None,
    filterbank: MelFilterbank | None = None,
    mel_bands: int = 128,
) -> AudioBuffer:
    """Full analysis-synthesis round trip on a mono buffer.

    STFT -> mel power -> pseudo-inverse magnitude estimate -> Griffin-Lim.
    Output length lands within one hop of the input length.
    """
    stft_config = stft_config or StftConfig()
    synthesis_config = synthesis_config or SynthesisConfig()
    if filterbank is None:
        filterbank = build_mel_filterbank(
            mel_bands, stft_config.bin_count, audio.sample_rate
        )
    mag = magnitude(stft(audio, stft_config))
    mel = mel_spectrogram(mag, filterbank)
    estimate = mel_to_linear(mel, filterbank, synthesis_config)
    out = griffin_lim(estimate, synthesis_config)
    out.source_name = audio.source_name
    return out
