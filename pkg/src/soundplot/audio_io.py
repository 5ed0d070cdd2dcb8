"""WAV decoding/encoding and waveform preprocessing.

Everything downstream operates on a mono float64 buffer at the canonical
22.05 kHz rate; this module gets arbitrary PCM/float WAV input into that
shape (decode, mixdown, resample, normalize, trim, edge silence removal).
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

TARGET_RATE = 22050

# Framing used for the energy-based edge trim (matches the analysis framing).
SILENCE_WIN = 2048
SILENCE_HOP = 512

_FMT_PCM = 0x0001
_FMT_FLOAT = 0x0003
_FMT_EXTENSIBLE = 0xFFFE

# Kernel quality: zero crossings of the sinc per side, Kaiser shape parameter.
_SINC_LOBES = 64
_KAISER_BETA = 12.0


class UnsupportedFormatError(Exception):
    """Not a WAV file, or a codec/sample format outside PCM 16/24/32 and float 32/64."""


class CorruptHeaderError(Exception):
    """RIFF/WAVE container is truncated or structurally invalid."""


class EmptyAudioError(Exception):
    """WAV file holds zero complete sample frames."""


class AllSilentError(Exception):
    """Every analysis frame fell below the silence threshold."""


@dataclass
class AudioBuffer:
    """A decoded signal: float64 samples plus its sample rate.

    ``samples`` is 1-D for mono audio; ``load_wav`` may return a 2-D
    (frames, channels) intermediate that ``to_mono`` collapses.
    """

    samples: np.ndarray
    sample_rate: int
    source_name: str = ""

    def __post_init__(self) -> None:
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        if self.samples.size and not np.all(np.isfinite(self.samples)):
            raise ValueError("samples must be finite")

    @property
    def channels(self) -> int:
        return 1 if self.samples.ndim == 1 else self.samples.shape[1]

    @property
    def duration_s(self) -> float:
        return self.samples.shape[0] / self.sample_rate


@dataclass
class PreprocessConfig:
    max_duration_s: float = 300.0
    remove_silence: bool = False
    silence_floor_db: float = 60.0

    def __post_init__(self) -> None:
        if self.max_duration_s <= 0:
            raise ValueError("max_duration_s must be positive")
        if self.silence_floor_db <= 0:
            raise ValueError("silence_floor_db must be positive")


def _decode_pcm(data: bytes, bits: int) -> np.ndarray:
    if bits == 16:
        return np.frombuffer(data, dtype="<i2").astype(np.float64) / 2**15
    if bits == 32:
        return np.frombuffer(data, dtype="<i4").astype(np.float64) / 2**31
    if bits == 24:
        raw = np.frombuffer(data, dtype=np.uint8).reshape(-1, 3).astype(np.int64)
        codes = raw[:, 0] | (raw[:, 1] << 8) | (raw[:, 2] << 16)
        codes = (codes ^ 0x800000) - 0x800000  # sign-extend 24-bit
        return codes.astype(np.float64) / 2**23
    raise UnsupportedFormatError(f"unsupported PCM bit depth: {bits}")


def _decode_float(data: bytes, bits: int) -> np.ndarray:
    if bits == 32:
        return np.frombuffer(data, dtype="<f4").astype(np.float64)
    if bits == 64:
        return np.frombuffer(data, dtype="<f8").copy()
    raise UnsupportedFormatError(f"unsupported float bit depth: {bits}")


def load_wav(path: str | Path) -> AudioBuffer:
    """Decode a RIFF/WAVE file to float64 in [-1, 1].

    Integer PCM is scaled by 2^(bits-1); float data is taken as stored.
    Channel count is preserved so ``to_mono`` can do the mixdown.
    """
    path = Path(path)
    blob = path.read_bytes()  # raises FileNotFoundError
    if len(blob) >= 12 and (blob[:4] != b"RIFF" or blob[8:12] != b"WAVE"):
        raise UnsupportedFormatError(f"{path.name}: not a RIFF/WAVE file")
    if len(blob) < 12:
        raise CorruptHeaderError(f"{path.name}: truncated RIFF header")

    fmt = None
    data = None
    pos = 12
    while pos + 8 <= len(blob):
        tag = blob[pos:pos + 4]
        (size,) = struct.unpack_from("<I", blob, pos + 4)
        body = blob[pos + 8:pos + 8 + size]
        if tag == b"fmt ":
            fmt = body
        elif tag == b"data":
            if len(body) < size:
                # tolerate a data chunk that overruns the file
                size = len(body)
            data = body
        pos += 8 + size + (size & 1)  # chunks are word-aligned

    if fmt is None or len(fmt) < 16:
        raise CorruptHeaderError(f"{path.name}: missing or short fmt chunk")
    if data is None:
        raise CorruptHeaderError(f"{path.name}: missing data chunk")

    fmt_tag, channels, rate, _byte_rate, block_align, bits = struct.unpack_from(
        "<HHIIHH", fmt, 0
    )
    if fmt_tag == _FMT_EXTENSIBLE:
        if len(fmt) < 40:
            raise CorruptHeaderError(f"{path.name}: short WAVE_FORMAT_EXTENSIBLE fmt chunk")
        (fmt_tag,) = struct.unpack_from("<H", fmt, 24)  # first bytes of SubFormat GUID
    if fmt_tag not in (_FMT_PCM, _FMT_FLOAT):
        raise UnsupportedFormatError(
            f"{path.name}: codec tag 0x{fmt_tag:04X} is not PCM or IEEE float"
        )
    if channels < 1 or rate < 1 or bits < 1:
        raise CorruptHeaderError(f"{path.name}: invalid fmt fields")
    if block_align != channels * (bits // 8):
        raise CorruptHeaderError(f"{path.name}: block alignment inconsistent with format")

    frame_bytes = channels * (bits // 8)
    n_frames = len(data) // frame_bytes
    if n_frames == 0:
        raise EmptyAudioError(f"{path.name}: zero data frames")
    data = data[: n_frames * frame_bytes]

    if fmt_tag == _FMT_PCM:
        flat = _decode_pcm(data, bits)
    else:
        flat = _decode_float(data, bits)
    samples = flat.reshape(n_frames, channels)
    if channels == 1:
        samples = samples[:, 0]
    return AudioBuffer(samples, rate, source_name=path.stem)


def save_wav(path: str | Path, buffer: AudioBuffer) -> None:
    """Write a mono buffer as 16-bit little-endian PCM."""
    if buffer.samples.ndim != 1:
        raise ValueError("save_wav expects a mono buffer")
    codes = np.round(np.clip(buffer.samples, -1.0, 1.0) * 32767.0).astype("<i2")
    payload = codes.tobytes()
    rate = buffer.sample_rate
    header = b"".join(
        [
            b"RIFF",
            struct.pack("<I", 36 + len(payload)),
            b"WAVE",
            b"fmt ",
            struct.pack("<IHHIIHH", 16, _FMT_PCM, 1, rate, rate * 2, 2, 16),
            b"data",
            struct.pack("<I", len(payload)),
        ]
    )
    Path(path).write_bytes(header + payload)


def to_mono(buffer: AudioBuffer) -> AudioBuffer:
    """Average channels; mono input passes through unchanged."""
    if buffer.samples.ndim == 1:
        return buffer
    return AudioBuffer(
        buffer.samples.mean(axis=1), buffer.sample_rate, buffer.source_name
    )


def _sinc_kernel(delta: np.ndarray, cutoff: float, half_width: float) -> np.ndarray:
    """Kaiser-windowed sinc lowpass, zero outside |delta| <= half_width."""
    r = delta / half_width
    inside = np.abs(r) <= 1.0
    window = np.zeros_like(delta)
    window[inside] = np.i0(_KAISER_BETA * np.sqrt(1.0 - r[inside] ** 2)) / np.i0(
        _KAISER_BETA
    )
    return 2.0 * cutoff * np.sinc(2.0 * cutoff * delta) * window


def resample(buffer: AudioBuffer, target_rate: int = TARGET_RATE) -> AudioBuffer:
    """Band-limited rational resampling with a Kaiser-windowed sinc kernel.

    Cutoff sits at the lower of the two Nyquist frequencies; equal rates
    return the input untouched. Output length is round(n * target / source).
    """
    if buffer.samples.ndim != 1:
        raise ValueError("resample expects a mono buffer; call to_mono first")
    if target_rate <= 0:
        raise ValueError("target_rate must be positive")
    src_rate = buffer.sample_rate
    if src_rate == target_rate:
        return buffer

    x = buffer.samples
    n_out = int(round(len(x) * target_rate / src_rate))
    if len(x) == 0 or n_out == 0:
        return AudioBuffer(np.zeros(0), target_rate, buffer.source_name)

    g = math.gcd(src_rate, target_rate)
    up, down = target_rate // g, src_rate // g
    cutoff = 0.5 * min(1.0, target_rate / src_rate)  # cycles per source sample
    half_width = _SINC_LOBES / (2.0 * cutoff)
    hw = int(math.ceil(half_width))

    pad = hw + 2
    xp = np.pad(x, pad)
    y = np.empty(n_out)
    # Output m sits at source position m*down/up; the fractional part cycles
    # through `up` phases, so precompute one tap set per phase.
    for phase in range(up):
        out_idx = np.arange(phase, n_out, up)
        if out_idx.size == 0:
            continue
        q0, rem = divmod(phase * down, up)
        frac = rem / up
        offsets = np.arange(-hw, hw + 2)
        taps = _sinc_kernel(offsets - frac, cutoff, half_width)
        count = out_idx.size
        base = pad + q0 - hw
        acc = np.zeros(count)
        for j, tap in enumerate(taps):
            if tap == 0.0:
                continue
            start = base + j
            acc += tap * xp[start : start + count * down : down]
        y[phase::up] = acc
    return AudioBuffer(y, target_rate, buffer.source_name)


def normalize(buffer: AudioBuffer) -> AudioBuffer:
    """Scale so the peak magnitude is exactly 1; all-zero input is unchanged."""
    if buffer.samples.size == 0:
        raise ValueError("cannot normalize an empty buffer")
    peak = np.max(np.abs(buffer.samples))
    if peak == 0.0:
        return buffer
    return AudioBuffer(
        buffer.samples / peak, buffer.sample_rate, buffer.source_name
    )


def trim_duration(buffer: AudioBuffer, max_duration_s: float) -> AudioBuffer:
    """Keep at most the first max_duration_s seconds (inclusive boundary)."""
    n_keep = int(round(max_duration_s * buffer.sample_rate))
    if buffer.samples.shape[0] <= n_keep:
        return buffer
    return AudioBuffer(
        buffer.samples[:n_keep], buffer.sample_rate, buffer.source_name
    )


def frame_rms(samples: np.ndarray, win: int = SILENCE_WIN, hop: int = SILENCE_HOP) -> np.ndarray:
    """RMS of each length-`win` frame taken every `hop` samples (no padding)."""
    n_frames = 1 + (len(samples) - win) // hop
    sq = np.concatenate(([0.0], np.cumsum(samples**2)))
    starts = np.arange(n_frames) * hop
    return np.sqrt((sq[starts + win] - sq[starts]) / win)


def remove_silence(buffer: AudioBuffer, config: PreprocessConfig) -> AudioBuffer:
    """Drop leading/trailing frames whose RMS sits below the relative floor.

    Thresholding is in dB relative to the loudest frame; everything between
    the first and last retained frame is kept, so interior gaps survive.
    Buffers shorter than one frame pass through unchanged.
    """
    x = buffer.samples
    if len(x) < SILENCE_WIN:
        return buffer
    rms = frame_rms(x)
    peak = rms.max()
    if peak == 0.0:
        raise AllSilentError("every frame is silent")
    with np.errstate(divide="ignore"):
        rel_db = 20.0 * np.log10(np.where(rms > 0, rms / peak, 0.0))
    keep = rel_db >= -config.silence_floor_db
    if not keep.any():
        raise AllSilentError("every frame is below the silence floor")
    first = int(np.argmax(keep))
    last = len(keep) - 1 - int(np.argmax(keep[::-1]))
    # The tail past the final full frame belongs to no frame; it is dropped
    # only when trailing frames were actually trimmed.
    end = len(x) if last == len(keep) - 1 else last * SILENCE_HOP + SILENCE_WIN
    out = x[first * SILENCE_HOP : end]
    return AudioBuffer(out, buffer.sample_rate, buffer.source_name)
