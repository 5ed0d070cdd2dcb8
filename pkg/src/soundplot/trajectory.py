"""Feature-to-space mapping: per-frame (centroid, bandwidth, pitch) -> [0,10]^3.

Each recording and stream is normalized independently so every trajectory
uses the full display volume; sphere size comes from frame energy in [0,1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pitch import PitchTrack
from .spectral import FeatureTimeSeries


@dataclass
class TrajectoryPoint:
    t: float
    x: float
    y: float
    z: float
    pitch_hz: float | None
    energy: float


@dataclass
class Trajectory3D:
    points: list[TrajectoryPoint]
    sample_rate: int
    hop: int

    def __len__(self) -> int:
        return len(self.points)

    def to_json_dict(self, audio_path: str) -> dict:
        return {
            "sample_rate": self.sample_rate,
            "hop": self.hop,
            "audio": audio_path,
            "points": [
                {
                    "t": p.t,
                    "x": p.x,
                    "y": p.y,
                    "z": p.z,
                    "pitch_hz": p.pitch_hz,
                    "energy": p.energy,
                }
                for p in self.points
            ],
        }


def _min_max(values: np.ndarray, lo: float, hi: float, midpoint: float) -> np.ndarray:
    vmin, vmax = float(values.min()), float(values.max())
    if vmax == vmin:
        return np.full_like(values, midpoint)
    return lo + (values - vmin) / (vmax - vmin) * (hi - lo)


def normalize_to_range(series: FeatureTimeSeries) -> FeatureTimeSeries:
    """Min-max map each row to [0, 10]; constant rows sit at 5."""
    rows = [_min_max(row, 0.0, 10.0, 5.0) for row in series.values]
    return FeatureTimeSeries(series.name, series.frame_times, np.vstack(rows))


def fill_unvoiced(track: PitchTrack, fallback_hz: float) -> FeatureTimeSeries:
    """Continuous pitch curve: interpolate across unvoiced gaps.

    Leading/trailing gaps take the nearest voiced value; a fully unvoiced
    track sits at the fallback frequency.
    """
    voiced = track.voiced_mask
    if not voiced.any():
        values = np.full(track.frame_count, fallback_hz)
    else:
        idx = np.arange(track.frame_count)
        values = np.interp(idx, idx[voiced], track.f0[voiced])
    return FeatureTimeSeries("pitch", track.frame_times, values)


def build_trajectory(
    centroid: FeatureTimeSeries,
    bandwidth: FeatureTimeSeries,
    pitch_filled: FeatureTimeSeries,
    energy: FeatureTimeSeries,
    pitch_track: PitchTrack | None = None,
    sample_rate: int = 22050,
    hop: int = 512,
) -> Trajectory3D:
    """Assemble one point per frame: x=centroid, y=bandwidth, z=pitch.

    pitch_track, when given, annotates points with the raw pitch (None on
    unvoiced frames) without affecting the z coordinate.
    """
    series = (centroid, bandwidth, pitch_filled, energy)
    times = centroid.frame_times
    for s in series[1:]:
        if s.frame_count != centroid.frame_count or not np.allclose(s.frame_times, times):
            raise ValueError("all feature series must share frame times")
    xs = normalize_to_range(centroid).values[0]
    ys = normalize_to_range(bandwidth).values[0]
    zs = normalize_to_range(pitch_filled).values[0]
    es = _min_max(energy.values[0], 0.0, 1.0, 0.5)
    raw_pitch = pitch_track.f0 if pitch_track is not None else pitch_filled.values[0]
    points = [
        TrajectoryPoint(
            t=float(times[m]),
            x=float(xs[m]),
            y=float(ys[m]),
            z=float(zs[m]),
            pitch_hz=None if np.isnan(raw_pitch[m]) else float(raw_pitch[m]),
            energy=float(es[m]),
        )
        for m in range(centroid.frame_count)
    ]
    return Trajectory3D(points, sample_rate, hop)
