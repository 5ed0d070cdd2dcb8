"""Probabilistic YIN fundamental-frequency tracking.

Per frame: difference function, cumulative mean normalization, multi-threshold
trough selection with Beta-distributed priors, then a voiced/unvoiced HMM over
log-spaced pitch bins decoded with Viterbi. Unvoiced frames carry NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.fft
from scipy.stats import beta as beta_dist

from .audio_io import AudioBuffer
from .spectral import StftConfig, frame_signal


@dataclass(frozen=True)
class PitchConfig:
    f_min: float = 65.0
    f_max: float = 2093.0
    stft: StftConfig = field(default_factory=StftConfig)
    threshold_count: int = 100
    beta_a: float = 2.0
    beta_b: float = 18.0
    bins_per_semitone: int = 10
    switch_prob: float = 0.01
    max_semitones_per_frame: int = 10
    no_trough_prob: float = 0.01

    def __post_init__(self) -> None:
        if not 0 < self.f_min < self.f_max:
            raise ValueError("need 0 < f_min < f_max")
        if self.threshold_count < 1 or self.bins_per_semitone < 1:
            raise ValueError("threshold_count and bins_per_semitone must be >= 1")
        if not 0 < self.switch_prob < 1:
            raise ValueError("switch_prob must be in (0, 1)")

    @property
    def bin_count(self) -> int:
        semitones = 12.0 * math.log2(self.f_max / self.f_min)
        return int(round(semitones * self.bins_per_semitone)) + 1

    def bin_frequencies(self) -> np.ndarray:
        i = np.arange(self.bin_count)
        return self.f_min * 2.0 ** (i / (12.0 * self.bins_per_semitone))

    def nearest_bin(self, freq: np.ndarray) -> np.ndarray:
        steps = 12.0 * self.bins_per_semitone * np.log2(np.asarray(freq) / self.f_min)
        return np.clip(np.round(steps).astype(int), 0, self.bin_count - 1)


@dataclass
class PitchTrack:
    frame_times: np.ndarray
    f0: np.ndarray  # Hz; NaN marks unvoiced frames
    voiced_prob: np.ndarray

    @property
    def voiced_mask(self) -> np.ndarray:
        return ~np.isnan(self.f0)

    @property
    def frame_count(self) -> int:
        return self.f0.shape[0]


@dataclass
class CandidateLattice:
    """Per-frame pitch candidates with probability mass plus unvoiced residual."""

    frame_times: np.ndarray
    freqs: list  # per frame: np.ndarray of candidate frequencies (Hz)
    probs: list  # per frame: np.ndarray of matching masses
    unvoiced_mass: np.ndarray

    @property
    def frame_count(self) -> int:
        return len(self.freqs)


def difference_function(frame: np.ndarray, tau_max: int) -> np.ndarray:
    """d(tau) = sum_j (x[j] - x[j+tau])^2 over all in-frame pairs, tau <= tau_max.

    Computed from the autocorrelation (FFT) plus prefix energy sums; the
    double-loop definition is what the tests check against.
    """
    w = frame.shape[0]
    if not 0 < tau_max < w:
        raise ValueError("need 0 < tau_max < frame length")
    size = 1 << (2 * w - 1).bit_length()
    spec = scipy.fft.rfft(frame, n=size)
    acf = scipy.fft.irfft(spec * np.conj(spec), n=size)[: tau_max + 1]
    cs = np.concatenate(([0.0], np.cumsum(frame**2)))
    taus = np.arange(tau_max + 1)
    head = cs[w - taus]          # energy of x[0 .. w-1-tau]
    tail = cs[w] - cs[taus]      # energy of x[tau .. w-1]
    d = np.maximum(head + tail - 2.0 * acf, 0.0)
    d[0] = 0.0
    return d


def cmndf(d: np.ndarray) -> np.ndarray:
    """Cumulative mean normalized difference; d'(0)=1 and 0/0 maps to 1."""
    out = np.ones_like(d)
    cum = np.cumsum(d[1:])
    taus = np.arange(1, d.shape[0])
    nz = cum > 0
    out[1:][nz] = d[1:][nz] * taus[nz] / cum[nz]
    return out


@lru_cache(maxsize=8)
def _thresholds(count: int, a: float, b: float) -> np.ndarray:
    """Quantile midpoints of Beta(a, b) over (0, 1), one prior slice each."""
    q = (np.arange(count) + 0.5) / count
    return beta_dist.ppf(q, a, b)


def _parabolic_refine(d_prime: np.ndarray, tau: int) -> float:
    """Vertex of the parabola through (tau-1, tau, tau+1), clamped to +-0.5."""
    left, mid, right = d_prime[tau - 1], d_prime[tau], d_prime[tau + 1]
    denom = left - 2.0 * mid + right
    if denom == 0.0:
        return float(tau)
    shift = 0.5 * (left - right) / denom
    return tau + float(np.clip(shift, -0.5, 0.5))


def pitch_candidates(
    d_prime: np.ndarray, config: PitchConfig, sample_rate: int
) -> tuple[np.ndarray, np.ndarray, float]:
    """Candidate (frequency, mass) pairs and unvoiced mass for one frame.

    Each Beta-quantile threshold elects the first normalized-difference trough
    below it inside the lag range; thresholds without a qualifying trough give
    no_trough_prob of their slice to the globally deepest trough and the rest
    to the unvoiced pool.
    """
    tau_min = max(1, int(math.ceil(sample_rate / config.f_max)))
    tau_top = min(d_prime.shape[0] - 2, int(math.floor(sample_rate / config.f_min)))
    if tau_top < tau_min:
        return np.empty(0), np.empty(0), 1.0

    seg = d_prime[tau_min : tau_top + 1]
    left = d_prime[tau_min - 1 : tau_top]
    right = d_prime[tau_min + 1 : tau_top + 2]
    is_trough = (seg < left) & (seg <= right)
    trough_taus = np.nonzero(is_trough)[0] + tau_min
    slice_mass = 1.0 / config.threshold_count
    if trough_taus.shape[0] == 0:
        return np.empty(0), np.empty(0), 1.0

    trough_vals = d_prime[trough_taus]
    thresholds = _thresholds(config.threshold_count, config.beta_a, config.beta_b)
    # first trough strictly below each threshold (troughs are lag-ordered)
    below = trough_vals[None, :] < thresholds[:, None]
    has_hit = below.any(axis=1)
    first_hit = below.argmax(axis=1)

    masses = np.zeros(trough_taus.shape[0])
    np.add.at(masses, first_hit[has_hit], slice_mass)
    n_missed = int((~has_hit).sum())
    unvoiced = n_missed * slice_mass * (1.0 - config.no_trough_prob)
    masses[int(np.argmin(trough_vals))] += n_missed * slice_mass * config.no_trough_prob

    keep = masses > 0
    taus_kept = trough_taus[keep]
    refined = np.array([_parabolic_refine(d_prime, t) for t in taus_kept])
    freqs = np.clip(sample_rate / refined, config.f_min, config.f_max)
    return freqs, masses[keep], float(unvoiced)


def _shift_max(scores: np.ndarray, log_kernel: np.ndarray, half: int):
    """Banded max-plus: best scores[j+d] + log_kernel[d+half] per target bin j.

    Returns the best value and the predecessor bin index for every j.
    """
    n = scores.shape[0]
    padded = np.full(n + 2 * half, -np.inf)
    padded[half : half + n] = scores
    windows = np.lib.stride_tricks.sliding_window_view(padded, n)
    cand = windows + log_kernel[:, None]
    s_best = np.argmax(cand, axis=0)
    cols = np.arange(n)
    return cand[s_best, cols], cols + s_best - half


def viterbi_decode(lattice: CandidateLattice, config: PitchConfig) -> PitchTrack:
    """Max-product decode over voiced/unvoiced pitch-bin states.

    Bin moves are scored by a triangular kernel limited to
    max_semitones_per_frame; voicing toggles cost switch_prob. Decoded voiced
    bins map back to the refined candidate frequency nearest the bin.
    """
    n_bins = config.bin_count
    bin_freqs = config.bin_frequencies()
    n_frames = lattice.frame_count
    half = config.max_semitones_per_frame * config.bins_per_semitone

    kernel = (half + 1.0) - np.abs(np.arange(-half, half + 1))
    with np.errstate(divide="ignore"):
        log_kernel = np.log(kernel / kernel.sum())
        log_stay = math.log1p(-config.switch_prob)
        log_switch = math.log(config.switch_prob)

        obs_v = np.zeros((n_frames, n_bins))
        obs_u = np.zeros((n_frames, n_bins))
        for m in range(n_frames):
            if lattice.freqs[m].shape[0]:
                np.add.at(obs_v[m], config.nearest_bin(lattice.freqs[m]), lattice.probs[m])
            # every duplicated unvoiced state carries the full residual mass;
            # dividing by the bin count would make unvoiced unreachable even
            # on frames that are almost certainly aperiodic
            obs_u[m] = lattice.unvoiced_mass[m]
        log_obs_v = np.log(obs_v)
        log_obs_u = np.log(obs_u)

    log_init = -math.log(2 * n_bins)
    delta_v = log_init + log_obs_v[0]
    delta_u = log_init + log_obs_u[0]
    ptr_v = np.zeros((n_frames, n_bins), dtype=np.int32)
    ptr_u = np.zeros((n_frames, n_bins), dtype=np.int32)

    for m in range(1, n_frames):
        best_v, pred_v = _shift_max(delta_v, log_kernel, half)
        best_u, pred_u = _shift_max(delta_u, log_kernel, half)
        from_u = best_u + log_switch
        from_v = best_v + log_stay
        take_u = from_u > from_v
        delta_v = np.where(take_u, from_u, from_v) + log_obs_v[m]
        ptr_v[m] = np.where(take_u, pred_u + n_bins, pred_v)
        from_v = best_v + log_switch
        from_u = best_u + log_stay
        take_u = from_u > from_v
        delta_u = np.where(take_u, from_u, from_v) + log_obs_u[m]
        ptr_u[m] = np.where(take_u, pred_u + n_bins, pred_v)

    state = int(np.argmax(np.concatenate([delta_v, delta_u])))
    path = np.empty(n_frames, dtype=np.int64)
    path[-1] = state
    for m in range(n_frames - 1, 0, -1):
        state = int(ptr_v[m, state] if state < n_bins else ptr_u[m, state - n_bins])
        path[m - 1] = state

    f0 = np.full(n_frames, np.nan)
    voiced_prob = np.array([p.sum() for p in lattice.probs])
    for m in range(n_frames):
        if path[m] >= n_bins:
            continue
        center = bin_freqs[path[m]]
        if lattice.freqs[m].shape[0]:
            nearest = int(np.argmin(np.abs(np.log2(lattice.freqs[m] / center))))
            f0[m] = lattice.freqs[m][nearest]
        else:
            f0[m] = center
    return PitchTrack(lattice.frame_times, f0, voiced_prob)


def build_lattice(audio: AudioBuffer, config: PitchConfig) -> CandidateLattice:
    """Frame the signal and run the per-frame candidate stage."""
    cfg = config.stft
    if math.ceil(audio.sample_rate / config.f_min) >= cfg.win_size:
        raise ValueError("win_size too small for f_min at this sample rate")
    frames = frame_signal(audio.samples, cfg.win_size, cfg.hop)
    tau_max = min(cfg.win_size - 1, int(math.floor(audio.sample_rate / config.f_min)) + 1)
    freqs, probs, unvoiced = [], [], []
    for frame in frames:
        f, p, u = pitch_candidates(
            cmndf(difference_function(frame, tau_max)), config, audio.sample_rate
        )
        freqs.append(f)
        probs.append(p)
        unvoiced.append(u)
    times = np.arange(frames.shape[0]) * cfg.hop / audio.sample_rate
    return CandidateLattice(times, freqs, probs, np.array(unvoiced))


def track_pitch(audio: AudioBuffer, config: PitchConfig | None = None) -> PitchTrack:
    """Full pYIN pass; frame times match the STFT framing."""
    config = config or PitchConfig()
    return viterbi_decode(build_lattice(audio, config), config)
