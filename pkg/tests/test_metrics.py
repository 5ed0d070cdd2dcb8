"""Quality metric identities, conventions, and invariances."""

import numpy as np
import pytest

from soundplot.audio_io import AudioBuffer
from soundplot.metrics import (
    EmptySignalError,
    align,
    compute_all,
    mel_correlation,
    snr_db,
    spectral_correlation,
    waveform_correlation,
)
from soundplot.spectral import StftConfig, istft, stft

RATE = 22050


def buf(samples):
    return AudioBuffer(np.asarray(samples, float), RATE)


def sine(freq, seconds=1.0, amp=1.0, phase=0.0):
    t = np.arange(int(round(RATE * seconds))) / RATE
    return buf(amp * np.sin(2 * np.pi * freq * t + phase))


class TestAlign:
    def test_truncates_to_shorter(self):
        a, b = align(buf(np.zeros(22050)), buf(np.zeros(22480)))
        assert a.samples.shape[0] == b.samples.shape[0] == 22050

    def test_equal_lengths_untouched(self):
        x = buf(np.ones(100))
        a, b = align(x, buf(np.zeros(100)))
        assert a is x

    def test_empty_rejected(self):
        with pytest.raises(EmptySignalError):
            align(buf(np.zeros(0)), buf(np.zeros(10)))


class TestSnr:
    def test_identical_hits_cap(self):
        x = sine(440, 0.2)
        assert snr_db(x, x) == 120.0

    def test_negated_is_minus_six(self):
        x = sine(440, 0.2)
        y = buf(-x.samples)
        assert snr_db(x, y) == pytest.approx(10 * np.log10(0.25), abs=1e-9)
        assert snr_db(x, y) == pytest.approx(-6.0206, abs=1e-3)

    def test_zero_estimate_gives_zero_db(self):
        x = sine(440, 0.2)
        assert snr_db(x, buf(np.zeros_like(x.samples))) == pytest.approx(0.0, abs=1e-12)

    def test_zero_signal_floor(self):
        assert snr_db(buf(np.zeros(100)), buf(np.ones(100))) == -120.0

    def test_snr_decreases_with_noise(self):
        rng = np.random.default_rng(0)
        x = sine(440, 0.3)
        values = []
        for scale in (0.01, 0.1, 1.0):
            noisy = buf(x.samples + scale * rng.standard_normal(x.samples.shape[0]))
            values.append(snr_db(x, noisy))
        assert values[0] > values[1] > values[2]


class TestWaveformCorrelation:
    def test_identity_and_negation(self):
        x = sine(440, 0.2)
        assert waveform_correlation(x, x) == pytest.approx(1.0)
        assert waveform_correlation(x, buf(-x.samples)) == pytest.approx(-1.0)

    def test_quadrature_sines_uncorrelated(self):
        # closed form: integral of sin * cos over whole periods vanishes
        x = sine(441, 1.0)
        y = sine(441, 1.0, phase=np.pi / 2)
        assert abs(waveform_correlation(x, y)) < 1e-3

    def test_constant_input_convention(self):
        assert waveform_correlation(buf(np.ones(50)), sine(440, 50 / RATE)) == 0.0

    def test_symmetry_bit_for_bit(self):
        rng = np.random.default_rng(1)
        a = buf(rng.standard_normal(1000))
        b = buf(rng.standard_normal(1000))
        assert waveform_correlation(a, b) == waveform_correlation(b, a)

    def test_affine_invariance(self):
        rng = np.random.default_rng(2)
        a = buf(rng.standard_normal(1000))
        b = buf(rng.standard_normal(1000))
        base = waveform_correlation(a, b)
        shifted = buf(2.5 * b.samples + 0.7)
        assert waveform_correlation(a, shifted) == pytest.approx(base, abs=1e-9)


class TestSpectralCorrelation:
    def test_identical_signals(self):
        x = sine(880, 0.5)
        assert spectral_correlation(x, x) == pytest.approx(1.0)

    def test_random_phase_rotation_keeps_structure(self):
        # rotating each frame's phase partially cancels in the overlap-add,
        # scaling frame amplitudes; the bin pattern (hence correlation)
        # survives far above the unrelated-signal level
        rng = np.random.default_rng(3)
        x = sine(880, 1.0, amp=0.8)
        spec = stft(x)
        phases = np.exp(2j * np.pi * rng.uniform(size=spec.values.shape[1]))
        spec.values = spec.values * phases[None, :]
        y = istft(spec, length=x.samples.shape[0])
        assert spectral_correlation(x, y) > 0.75

    def test_silence_convention(self):
        x = sine(880, 0.3)
        assert spectral_correlation(x, buf(np.zeros_like(x.samples))) == 0.0


class TestMelCorrelation:
    def test_identical(self):
        x = sine(700, 0.4)
        assert mel_correlation(x, x) == pytest.approx(1.0)

    def test_independent_noise_low_correlation(self):
        for seed in range(5):
            rng_a = np.random.default_rng(100 + seed)
            rng_b = np.random.default_rng(200 + seed)
            a = buf(rng_a.standard_normal(RATE // 2))
            b = buf(rng_b.standard_normal(RATE // 2))
            assert abs(mel_correlation(a, b)) < 0.3


class TestComputeAll:
    def test_self_comparison(self):
        x = sine(440, 0.3)
        m = compute_all(x, x)
        assert (m.snr_db, m.waveform_corr, m.spectral_corr, m.mel_corr) == (
            120.0,
            pytest.approx(1.0),
            pytest.approx(1.0),
            pytest.approx(1.0),
        )
        assert m.aligned_length == x.samples.shape[0]

    def test_negated_comparison(self):
        x = sine(440, 0.3)
        m = compute_all(x, buf(-x.samples))
        assert m.snr_db == pytest.approx(-6.0206, abs=1e-3)
        assert m.waveform_corr == pytest.approx(-1.0)
        assert m.spectral_corr == pytest.approx(1.0)
        assert m.mel_corr == pytest.approx(1.0)

    def test_dict_round_trip(self):
        x = sine(440, 0.2)
        d = compute_all(x, x).as_dict()
        assert set(d) == {
            "snr_db",
            "waveform_corr",
            "spectral_corr",
            "mel_corr",
            "aligned_length",
        }
