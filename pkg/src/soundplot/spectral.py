"""Short-time spectral analysis: STFT/ISTFT, mel filterbank, MFCC, descriptors.

Frames are centered via reflection padding of half a window on both sides,
giving 1 + floor(n / hop) frames whose timestamps sit at m * hop / rate.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy.fft

from .audio_io import AudioBuffer

DB_FLOOR = 1e-10
DB_RANGE = 80.0


class AudioTooShortError(Exception):
    """Signal has no samples to analyze."""


class NonColaConfigError(Exception):
    """Window/hop pair does not satisfy constant overlap-add."""


class InvalidRangeError(Exception):
    """Mel filterbank frequency range is empty or exceeds Nyquist."""


@dataclass(frozen=True)
class StftConfig:
    win_size: int = 2048
    hop: int = 512
    centered: bool = True

    def __post_init__(self) -> None:
        if self.hop <= 0 or self.hop > self.win_size:
            raise ValueError("hop must be in [1, win_size]")
        if self.win_size & (self.win_size - 1):
            raise ValueError("win_size must be a power of two")

    @property
    def bin_count(self) -> int:
        return self.win_size // 2 + 1

    def is_cola(self) -> bool:
        # Periodic Hann overlap-adds to a constant whenever hop divides the
        # window and at least 2x overlap remains.
        return self.win_size % self.hop == 0 and self.hop <= self.win_size // 2


@lru_cache(maxsize=8)
def hann_window(win_size: int) -> np.ndarray:
    """Periodic Hann window (the COLA-friendly variant)."""
    n = np.arange(win_size)
    return 0.5 * (1.0 - np.cos(2.0 * np.pi * n / win_size))


@dataclass
class ComplexSpectrogram:
    values: np.ndarray  # (bins, frames) complex
    sample_rate: int
    config: StftConfig

    @property
    def frame_count(self) -> int:
        return self.values.shape[1]

    def frame_times(self) -> np.ndarray:
        return np.arange(self.frame_count) * self.config.hop / self.sample_rate


@dataclass
class MagnitudeSpectrogram:
    values: np.ndarray  # (bins, frames) nonnegative real
    sample_rate: int
    config: StftConfig

    @property
    def frame_count(self) -> int:
        return self.values.shape[1]

    def frame_times(self) -> np.ndarray:
        return np.arange(self.frame_count) * self.config.hop / self.sample_rate

    def bin_frequencies(self) -> np.ndarray:
        return np.arange(self.values.shape[0]) * self.sample_rate / self.config.win_size


@dataclass
class MelFilterbank:
    weights: np.ndarray  # (bands, bins)
    band_count: int
    f_min: float
    f_max: float
    sample_rate: int


@dataclass
class MelSpectrogram:
    values: np.ndarray  # (bands, frames), power scale
    filterbank: MelFilterbank
    sample_rate: int
    config: StftConfig

    @property
    def frame_count(self) -> int:
        return self.values.shape[1]

    def frame_times(self) -> np.ndarray:
        return np.arange(self.frame_count) * self.config.hop / self.sample_rate


@dataclass
class FeatureTimeSeries:
    """Per-frame feature rows: (dims, frames) with one timestamp per frame."""

    name: str
    frame_times: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        self.frame_times = np.asarray(self.frame_times, dtype=np.float64)
        self.values = np.atleast_2d(np.asarray(self.values, dtype=np.float64))
        if self.values.shape[1] != self.frame_times.shape[0]:
            raise ValueError("values column count must match frame_times length")

    @property
    def dims(self) -> int:
        return self.values.shape[0]

    @property
    def frame_count(self) -> int:
        return self.values.shape[1]


def frame_signal(samples: np.ndarray, win_size: int, hop: int) -> np.ndarray:
    """Centered frames (reflection padded), shape (frames, win_size)."""
    if samples.shape[0] == 0:
        raise AudioTooShortError("cannot frame an empty signal")
    padded = np.pad(samples, win_size // 2, mode="reflect")
    windows = np.lib.stride_tricks.sliding_window_view(padded, win_size)
    return windows[::hop]


def stft(audio: AudioBuffer, config: StftConfig | None = None) -> ComplexSpectrogram:
    config = config or StftConfig()
    frames = frame_signal(audio.samples, config.win_size, config.hop)
    windowed = frames * hann_window(config.win_size)
    values = scipy.fft.rfft(windowed, axis=1).T
    return ComplexSpectrogram(values, audio.sample_rate, config)


def istft(spec: ComplexSpectrogram, length: int | None = None) -> AudioBuffer:
    """Weighted overlap-add inverse, normalized by the summed squared window.

    With no explicit length the output spans (frames - 1) * hop samples; pass
    the original sample count for an exact round trip.
    """
    config = spec.config
    if not config.is_cola():
        raise NonColaConfigError(
            f"win={config.win_size} hop={config.hop} violates overlap-add"
        )
    win, hop = config.win_size, config.hop
    window = hann_window(win)
    frames = scipy.fft.irfft(spec.values.T, n=win, axis=1) * window
    m = frames.shape[0]
    total = (m - 1) * hop + win
    acc = np.zeros(total)
    wsum = np.zeros(total)
    wsq = window**2
    for i in range(m):
        acc[i * hop : i * hop + win] += frames[i]
        wsum[i * hop : i * hop + win] += wsq
    out = np.where(wsum > 1e-12, acc / np.where(wsum > 0, wsum, 1.0), 0.0)
    if length is None:
        length = (m - 1) * hop
    start = win // 2
    out = out[start : start + length]
    if out.shape[0] < length:
        out = np.pad(out, (0, length - out.shape[0]))
    return AudioBuffer(out, spec.sample_rate)


def magnitude(spec: ComplexSpectrogram) -> MagnitudeSpectrogram:
    return MagnitudeSpectrogram(np.abs(spec.values), spec.sample_rate, spec.config)


def hz_to_mel(freq):
    """Slaney-style mel: linear to 1 kHz, logarithmic above."""
    freq = np.asarray(freq, dtype=np.float64)
    mel = freq * 3.0 / 200.0
    log_region = freq >= 1000.0
    mel = np.where(
        log_region,
        15.0 + np.log(np.where(log_region, freq, 1000.0) / 1000.0) * (27.0 / np.log(6.4)),
        mel,
    )
    return mel


def mel_to_hz(mel):
    mel = np.asarray(mel, dtype=np.float64)
    freq = mel * 200.0 / 3.0
    log_region = mel >= 15.0
    freq = np.where(log_region, 1000.0 * np.exp(np.log(6.4) * (mel - 15.0) / 27.0), freq)
    return freq


def build_mel_filterbank(
    band_count: int = 128,
    bin_count: int = 1025,
    sample_rate: int = 22050,
    f_min: float = 0.0,
    f_max: float | None = None,
) -> MelFilterbank:
    """Triangular mel filters with peak area normalization 2/(upper-lower)."""
    nyquist = sample_rate / 2.0
    if f_max is None:
        f_max = nyquist
    if f_min >= f_max or f_max > nyquist + 1e-9:
        raise InvalidRangeError(f"invalid mel range [{f_min}, {f_max}] at fs={sample_rate}")
    win_size = 2 * (bin_count - 1)
    bin_freqs = np.arange(bin_count) * sample_rate / win_size
    corners = mel_to_hz(np.linspace(hz_to_mel(f_min), hz_to_mel(f_max), band_count + 2))
    lower, peak, upper = corners[:-2, None], corners[1:-1, None], corners[2:, None]
    rising = (bin_freqs - lower) / np.maximum(peak - lower, 1e-12)
    falling = (upper - bin_freqs) / np.maximum(upper - peak, 1e-12)
    weights = np.maximum(0.0, np.minimum(rising, falling))
    weights *= 2.0 / (upper - lower)
    return MelFilterbank(weights, band_count, f_min, float(f_max), sample_rate)


def mel_spectrogram(mag: MagnitudeSpectrogram, fb: MelFilterbank) -> MelSpectrogram:
    """Filterbank applied to the power spectrum (squared magnitude)."""
    if fb.weights.shape[1] != mag.values.shape[0]:
        raise ValueError("filterbank bin count does not match spectrogram")
    values = fb.weights @ (mag.values**2)
    return MelSpectrogram(values, fb, mag.sample_rate, mag.config)


def power_to_db(power: np.ndarray, floor: float = DB_FLOOR, dynamic_range: float = DB_RANGE) -> np.ndarray:
    """10*log10 with an absolute floor and a clamp to [peak - range, peak]."""
    db = 10.0 * np.log10(np.maximum(power, floor))
    return np.maximum(db, db.max() - dynamic_range)


def mfcc(mel: MelSpectrogram, coefficient_count: int = 13) -> FeatureTimeSeries:
    """Orthonormal DCT-II of the dB mel spectrum, first 13 coefficients."""
    db = power_to_db(mel.values)
    coeffs = scipy.fft.dct(db, type=2, axis=0, norm="ortho")[:coefficient_count]
    return FeatureTimeSeries("mfcc", mel.frame_times(), coeffs)


def spectral_centroid(mag: MagnitudeSpectrogram) -> FeatureTimeSeries:
    """Magnitude-weighted mean frequency per frame; 0 Hz for empty frames."""
    freqs = mag.bin_frequencies()
    totals = mag.values.sum(axis=0)
    weighted = freqs @ mag.values
    centroid = np.where(totals > 0, weighted / np.where(totals > 0, totals, 1.0), 0.0)
    return FeatureTimeSeries("spectral_centroid", mag.frame_times(), centroid)


def spectral_bandwidth(mag: MagnitudeSpectrogram) -> FeatureTimeSeries:
    """Magnitude-weighted frequency standard deviation around the centroid."""
    freqs = mag.bin_frequencies()
    totals = mag.values.sum(axis=0)
    centroid = spectral_centroid(mag).values[0]
    dev = (freqs[:, None] - centroid[None, :]) ** 2
    var = np.where(
        totals > 0, (dev * mag.values).sum(axis=0) / np.where(totals > 0, totals, 1.0), 0.0
    )
    return FeatureTimeSeries("spectral_bandwidth", mag.frame_times(), np.sqrt(var))


def spectral_rolloff(mag: MagnitudeSpectrogram, fraction: float = 0.85) -> FeatureTimeSeries:
    """Frequency below which `fraction` of each frame's magnitude lies."""
    freqs = mag.bin_frequencies()
    cum = np.cumsum(mag.values, axis=0)
    threshold = fraction * cum[-1]
    k = np.argmax(cum >= threshold, axis=0)
    return FeatureTimeSeries("spectral_rolloff", mag.frame_times(), freqs[k])


def spectral_contrast(
    mag: MagnitudeSpectrogram, band_count: int = 6, alpha: float = 0.02
) -> FeatureTimeSeries:
    """Peak-to-valley dB spread per octave band (first band is 0-200 Hz).

    Per band and frame: dB ratio between the mean of the top and bottom
    alpha-quantiles of sorted bin magnitudes (at least one bin each).
    """
    nyquist = mag.sample_rate / 2.0
    edges = [0.0] + [min(200.0 * 2.0**i, nyquist) for i in range(band_count)] + [nyquist]
    freqs = mag.bin_frequencies()
    rows = []
    for b in range(band_count + 1):
        lo, hi = edges[b], edges[b + 1]
        mask = (freqs >= lo) & ((freqs < hi) | ((b == band_count) & (freqs <= hi)))
        if not mask.any():
            rows.append(np.zeros(mag.frame_count))
            continue
        band = np.sort(mag.values[mask], axis=0)
        n_q = max(1, int(round(alpha * band.shape[0])))
        valley = band[:n_q].mean(axis=0)
        peak = band[-n_q:].mean(axis=0)
        rows.append(20.0 * np.log10(np.maximum(peak, DB_FLOOR) / np.maximum(valley, DB_FLOOR)))
    return FeatureTimeSeries("spectral_contrast", mag.frame_times(), np.vstack(rows))


def zero_crossing_rate(audio: AudioBuffer, config: StftConfig | None = None) -> FeatureTimeSeries:
    """Fraction of adjacent sample pairs per frame with a strict sign change.

    Zero counts as nonnegative; framing matches the STFT layout.
    """
    config = config or StftConfig()
    win, hop = config.win_size, config.hop
    padded = np.pad(audio.samples, win // 2, mode="reflect")
    nonneg = padded >= 0
    flips = np.concatenate(([0], np.cumsum(nonneg[1:] != nonneg[:-1])))
    n_frames = 1 + audio.samples.shape[0] // hop
    starts = np.arange(n_frames) * hop
    counts = flips[starts + win - 1] - flips[starts]
    times = np.arange(n_frames) * hop / audio.sample_rate
    return FeatureTimeSeries("zero_crossing_rate", times, counts / win)


def rms_energy(mag: MagnitudeSpectrogram) -> FeatureTimeSeries:
    """Root-mean-square over magnitude bins, one value per frame."""
    values = np.sqrt(np.mean(mag.values**2, axis=0))
    return FeatureTimeSeries("rms_energy", mag.frame_times(), values)


def features_to_csv(series: Sequence[FeatureTimeSeries]) -> str:
    """Shared-timebase CSV: time_s plus one column per feature dimension.

    Values use 9 significant digits; NaN (no pitch) serializes as empty.
    """
    if not series:
        raise ValueError("need at least one feature series")
    times = series[0].frame_times
    for s in series[1:]:
        if s.frame_count != series[0].frame_count:
            raise ValueError("feature series disagree on frame count")
    header = ["time_s"]
    for s in series:
        if s.dims == 1:
            header.append(s.name)
        else:
            header.extend(f"{s.name}_{d}" for d in range(s.dims))
    out = io.StringIO()
    out.write(",".join(header) + "\n")
    for m in range(series[0].frame_count):
        row = [f"{times[m]:.9g}"]
        for s in series:
            for d in range(s.dims):
                v = s.values[d, m]
                row.append("" if np.isnan(v) else f"{v:.9g}")
        out.write(",".join(row) + "\n")
    return out.getvalue()


def write_features_csv(path: str | Path, series: Sequence[FeatureTimeSeries]) -> None:
    Path(path).write_text(features_to_csv(series), encoding="utf-8")
