"""Shared fixtures: deterministic test signals used across modules."""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from soundplot.audio_io import AudioBuffer

RATE = 22050


def make_birdsong_like(seconds: float = 3.0) -> AudioBuffer:
    """Two enveloped chirps plus a trill; fully deterministic, no RNG.

    Mimics the temporal structure of a songbird phrase: an upsweep, a
    downsweep, then a frequency-modulated trill, with silence between.
    """
    n = np.arange(int(round(seconds * RATE)))
    t = n / RATE
    x = np.zeros_like(t)

    up = (t >= 0.2) & (t < 0.7)
    tu = t[up] - 0.2
    x[up] += np.sin(2 * np.pi * (2000 * tu + 2000 * tu**2)) * np.hanning(up.sum())

    down = (t >= 1.0) & (t < 1.6)
    td = t[down] - 1.0
    x[down] += np.sin(2 * np.pi * (3500 * td - 1666.7 * td**2)) * np.hanning(down.sum())

    trill = (t >= 2.0) & (t < 2.8)
    tr = t[trill] - 2.0
    phase = 2800 * tr - 400 / (2 * np.pi * 25) * np.cos(2 * np.pi * 25 * tr)
    x[trill] += np.sin(2 * np.pi * phase) * np.hanning(trill.sum())

    return AudioBuffer(0.9 * x / np.max(np.abs(x)), RATE, "fixture")


def make_hop_synchronous_cosine() -> AudioBuffer:
    """Cosine whose period divides the hop and whose ends mirror evenly.

    The reflection-padded extension of this signal is itself a pure cosine,
    so its magnitude spectrogram is a perfectly consistent phase-retrieval
    target with no boundary pathology.
    """
    n_samples = 1 + 128 * 172  # even symmetry point lands on the last sample
    freq = 10 * RATE / 512
    n = np.arange(n_samples)
    return AudioBuffer(np.cos(2 * np.pi * freq * n / RATE), RATE, "cosine")


@pytest.fixture(scope="session")
def birdsong_like() -> AudioBuffer:
    return make_birdsong_like()


@pytest.fixture(scope="session")
def hop_sync_cosine() -> AudioBuffer:
    return make_hop_synchronous_cosine()
