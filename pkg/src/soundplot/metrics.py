"""Synthesis quality metrics: SNR plus waveform/spectral/mel correlations.

All comparisons run on length-aligned signals (plain truncation; Griffin-Lim
output differs from the input by at most one hop). Pearson correlations of
constant inputs are defined as 0.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .audio_io import AudioBuffer
from .spectral import (
    MelFilterbank,
    StftConfig,
    build_mel_filterbank,
    magnitude,
    mel_spectrogram,
    stft,
)

SNR_CAP_DB = 120.0


class EmptySignalError(Exception):
    """No overlapping samples to compare."""


@dataclass
class QualityMetrics:
    snr_db: float
    waveform_corr: float
    spectral_corr: float
    mel_corr: float
    aligned_length: int

    def as_dict(self) -> dict:
        return asdict(self)


def align(x: AudioBuffer, x_hat: AudioBuffer) -> tuple[AudioBuffer, AudioBuffer]:
    """Truncate both signals to the shorter length; no shifting, no resampling."""
    n = min(x.samples.shape[0], x_hat.samples.shape[0])
    if n == 0:
        raise EmptySignalError("aligned signals are empty")
    if x.samples.shape[0] == x_hat.samples.shape[0]:
        return x, x_hat
    return (
        AudioBuffer(x.samples[:n], x.sample_rate, x.source_name),
        AudioBuffer(x_hat.samples[:n], x_hat.sample_rate, x_hat.source_name),
    )


def snr_db(x: AudioBuffer, x_hat: AudioBuffer) -> float:
    """10*log10 of signal-to-error energy, capped to +-120 dB."""
    a, b = align(x, x_hat)
    signal = float(np.sum(a.samples**2))
    error = float(np.sum((a.samples - b.samples) ** 2))
    if signal == 0.0:
        return -SNR_CAP_DB
    if error == 0.0:
        return SNR_CAP_DB
    return float(np.clip(10.0 * np.log10(signal / error), -SNR_CAP_DB, SNR_CAP_DB))


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Pearson correlation; 0 when either input is constant."""
    da = a - a.mean()
    db = b - b.mean()
    var_a = float(np.dot(da, da))
    var_b = float(np.dot(db, db))
    if var_a == 0.0 or var_b == 0.0:
        return 0.0
    return float(np.dot(da, db) / np.sqrt(var_a * var_b))


def waveform_correlation(x: AudioBuffer, x_hat: AudioBuffer) -> float:
    a, b = align(x, x_hat)
    return _pearson(a.samples, b.samples)


def spectral_correlation(
    x: AudioBuffer, x_hat: AudioBuffer, config: StftConfig | None = None
) -> float:
    """Pearson correlation of flattened linear magnitude spectrograms."""
    config = config or StftConfig()
    a, b = align(x, x_hat)
    mag_a = magnitude(stft(a, config)).values.ravel()
    mag_b = magnitude(stft(b, config)).values.ravel()
    return _pearson(mag_a, mag_b)


def mel_correlation(
    x: AudioBuffer,
    x_hat: AudioBuffer,
    fb: MelFilterbank | None = None,
    config: StftConfig | None = None,
) -> float:
    """Pearson correlation of flattened mel power spectrograms.

    Computed on the linear power scale; a dB-domain variant punishes the
    phase-reconstruction wobble on steady tones far harder than the
    perceptual-structure comparison this metric is meant to capture.
    """
    config = config or StftConfig()
    a, b = align(x, x_hat)
    if fb is None:
        fb = build_mel_filterbank(128, config.bin_count, a.sample_rate)
    mel_a = mel_spectrogram(magnitude(stft(a, config)), fb).values
    mel_b = mel_spectrogram(magnitude(stft(b, config)), fb).values
    return _pearson(mel_a.ravel(), mel_b.ravel())


def compute_all(
    x: AudioBuffer,
    x_hat: AudioBuffer,
    config: StftConfig | None = None,
    fb: MelFilterbank | None = None,
) -> QualityMetrics:
    config = config or StftConfig()
    a, b = align(x, x_hat)
    return QualityMetrics(
        snr_db=snr_db(a, b),
        waveform_corr=waveform_correlation(a, b),
        spectral_corr=spectral_correlation(a, b, config),
        mel_corr=mel_correlation(a, b, fb, config),
        aligned_length=a.samples.shape[0],
    )
