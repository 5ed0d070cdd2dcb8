"""Dependency-free raster figures: spectrogram comparison and PCA embedding.

Everything draws into uint8 RGB arrays and encodes PNG directly (zlib), with
a fixed 256-entry colormap and an embedded 5x7 bitmap font so outputs are
byte-stable for golden-image comparison.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .audio_io import AudioBuffer
from .embedding import PairedEmbedding
from .metrics import QualityMetrics
from .spectral import power_to_db

COMPARISON_SIZE = (1600, 1200)
EMBEDDING_SIZE = (1800, 600)
GUTTER = 10
STRIP_HEIGHT = 40

WAVEFORM_COLOR = (24, 64, 160)
ORIGINAL_COLOR = (0, 80, 220)
SYNTH_COLOR = (0, 160, 60)
PAIR_COLOR = (150, 150, 150)
TEXT_COLOR = (30, 30, 30)


class EmptyEmbeddingError(Exception):
    """No points to draw."""


# Perceptually-ordered dark-blue-to-yellow map, 256 RGB byte triples.
_COLORMAP_HEX = (
    "44015444025645045745055946075a46085c460a5d460b5e470d60470e61471063471164471365481467481668481769"
    "48186a481a6c481b6d481c6e481d6f481f70482071482173482374482475482576482677482878482979472a7a472c7a"
    "472d7b472e7c472f7d46307e46327e46337f463480453581453781453882443983443a83443b84433d84433e85423f85"
    "4240864241864142874144874045884046883f47883f48893e49893e4a893e4c8a3d4d8a3d4e8a3c4f8a3c508b3b518b"
    "3b528b3a538b3a548c39558c39568c38588c38598c375a8c375b8d365c8d365d8d355e8d355f8d34608d34618d33628d"
    "33638d32648e32658e31668e31678e31688e30698e306a8e2f6b8e2f6c8e2e6d8e2e6e8e2e6f8e2d708e2d718e2c718e"
    "2c728e2c738e2b748e2b758e2a768e2a778e2a788e29798e297a8e297b8e287c8e287d8e277e8e277f8e27808e26818e"
    "26828e26828e25838e25848e25858e24868e24878e23888e23898e238a8d228b8d228c8d228d8d218e8d218f8d21908d"
    "21918c20928c20928c20938c1f948c1f958b1f968b1f978b1f988b1f998a1f9a8a1e9b8a1e9c891e9d891f9e891f9f88"
    "1fa0881fa1881fa1871fa28720a38620a48621a58521a68522a78522a88423a98324aa8325ab8225ac8226ad8127ad81"
    "28ae8029af7f2ab07f2cb17e2db27d2eb37c2fb47c31b57b32b67a34b67935b77937b87838b9773aba763bbb753dbc74"
    "3fbc7340bd7242be7144bf7046c06f48c16e4ac16d4cc26c4ec36b50c46a52c56954c56856c66758c7655ac8645cc863"
    "5ec96260ca6063cb5f65cb5e67cc5c69cd5b6ccd5a6ece5870cf5773d05675d05477d1537ad1517cd2507fd34e81d34d"
    "84d44b86d54989d5488bd6468ed64590d74393d74195d84098d83e9bd93c9dd93ba0da39a2da37a5db36a8db34aadc32"
    "addc30b0dd2fb2dd2db5de2bb8de29bade28bddf26c0df25c2df23c5e021c8e020cae11fcde11dd0e11cd2e21bd5e21a"
    "d8e219dae319dde318dfe318e2e418e5e419e7e419eae51aece51befe51cf1e51df4e61ef6e620f8e621fbe723fde725"
)
COLORMAP = np.frombuffer(bytes.fromhex(_COLORMAP_HEX), dtype=np.uint8).reshape(256, 3)

# Classic 5x7 font, one byte per column, bit 0 = top row.
FONT_5X7 = {
    "0": (0x3E, 0x51, 0x49, 0x45, 0x3E),
    "1": (0x00, 0x42, 0x7F, 0x40, 0x00),
    "2": (0x42, 0x61, 0x51, 0x49, 0x46),
    "3": (0x21, 0x41, 0x45, 0x4B, 0x31),
    "4": (0x18, 0x14, 0x12, 0x7F, 0x10),
    "5": (0x27, 0x45, 0x45, 0x45, 0x39),
    "6": (0x3C, 0x4A, 0x49, 0x49, 0x30),
    "7": (0x01, 0x71, 0x09, 0x05, 0x03),
    "8": (0x36, 0x49, 0x49, 0x49, 0x36),
    "9": (0x06, 0x49, 0x49, 0x29, 0x1E),
    "A": (0x7E, 0x11, 0x11, 0x11, 0x7E),
    "B": (0x7F, 0x49, 0x49, 0x49, 0x36),
    "C": (0x3E, 0x41, 0x41, 0x41, 0x22),
    "D": (0x7F, 0x41, 0x41, 0x22, 0x1C),
    "E": (0x7F, 0x49, 0x49, 0x49, 0x41),
    "F": (0x7F, 0x09, 0x09, 0x09, 0x01),
    "G": (0x3E, 0x41, 0x49, 0x49, 0x7A),
    "H": (0x7F, 0x08, 0x08, 0x08, 0x7F),
    "I": (0x00, 0x41, 0x7F, 0x41, 0x00),
    "J": (0x20, 0x40, 0x41, 0x3F, 0x01),
    "K": (0x7F, 0x08, 0x14, 0x22, 0x41),
    "L": (0x7F, 0x40, 0x40, 0x40, 0x40),
    "M": (0x7F, 0x02, 0x0C, 0x02, 0x7F),
    "N": (0x7F, 0x04, 0x08, 0x10, 0x7F),
    "O": (0x3E, 0x41, 0x41, 0x41, 0x3E),
    "P": (0x7F, 0x09, 0x09, 0x09, 0x06),
    "Q": (0x3E, 0x41, 0x51, 0x21, 0x5E),
    "R": (0x7F, 0x09, 0x19, 0x29, 0x46),
    "S": (0x46, 0x49, 0x49, 0x49, 0x31),
    "T": (0x01, 0x01, 0x7F, 0x01, 0x01),
    "U": (0x3F, 0x40, 0x40, 0x40, 0x3F),
    "V": (0x1F, 0x20, 0x40, 0x20, 0x1F),
    "W": (0x3F, 0x40, 0x38, 0x40, 0x3F),
    "X": (0x63, 0x14, 0x08, 0x14, 0x63),
    "Y": (0x07, 0x08, 0x70, 0x08, 0x07),
    "Z": (0x61, 0x51, 0x49, 0x45, 0x43),
    " ": (0x00, 0x00, 0x00, 0x00, 0x00),
    ".": (0x00, 0x60, 0x60, 0x00, 0x00),
    ",": (0x00, 0x50, 0x30, 0x00, 0x00),
    ":": (0x00, 0x36, 0x36, 0x00, 0x00),
    "-": (0x08, 0x08, 0x08, 0x08, 0x08),
    "+": (0x08, 0x08, 0x3E, 0x08, 0x08),
    "=": (0x14, 0x14, 0x14, 0x14, 0x14),
    "(": (0x00, 0x1C, 0x22, 0x41, 0x00),
    ")": (0x00, 0x41, 0x22, 0x1C, 0x00),
    "/": (0x20, 0x10, 0x08, 0x04, 0x02),
    "%": (0x23, 0x13, 0x08, 0x64, 0x62),
    "_": (0x40, 0x40, 0x40, 0x40, 0x40),
}


@dataclass
class RasterImage:
    width: int
    height: int
    pixels: np.ndarray  # (height, width, 3) uint8

    @classmethod
    def blank(cls, width: int, height: int, color=(255, 255, 255)) -> "RasterImage":
        px = np.empty((height, width, 3), dtype=np.uint8)
        px[:] = color
        return cls(width, height, px)

    def to_png_bytes(self) -> bytes:
        return write_png(self.pixels)

    def save(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_png_bytes())


def write_png(pixels: np.ndarray) -> bytes:
    """Encode (h, w, 3) uint8 as PNG: 8-bit RGB, no alpha, no interlacing."""
    if pixels.dtype != np.uint8 or pixels.ndim != 3 or pixels.shape[2] != 3:
        raise ValueError("expected (h, w, 3) uint8 pixel data")
    h, w = pixels.shape[:2]
    raw = b"".join(b"\x00" + pixels[r].tobytes() for r in range(h))

    def chunk(tag: bytes, data: bytes) -> bytes:
        return (
            struct.pack(">I", len(data))
            + tag
            + data
            + struct.pack(">I", zlib.crc32(tag + data))
        )

    header = struct.pack(">IIBBBBB", w, h, 8, 2, 0, 0, 0)
    return (
        b"\x89PNG\r\n\x1a\n"
        + chunk(b"IHDR", header)
        + chunk(b"IDAT", zlib.compress(raw, 9))
        + chunk(b"IEND", b"")
    )


def draw_text(pixels: np.ndarray, x: int, y: int, text: str, color=TEXT_COLOR, scale: int = 1) -> int:
    """Stamp text at (x, y) top-left; returns the x position after the text."""
    h, w = pixels.shape[:2]
    for ch in text.upper():
        glyph = FONT_5X7.get(ch)
        if glyph is None:
            glyph = FONT_5X7[" "]
        for cx, bits in enumerate(glyph):
            for ry in range(7):
                if bits >> ry & 1:
                    x0 = x + cx * scale
                    y0 = y + ry * scale
                    if 0 <= x0 and x0 + scale <= w and 0 <= y0 and y0 + scale <= h:
                        pixels[y0 : y0 + scale, x0 : x0 + scale] = color
        x += 6 * scale
    return x


def text_width(text: str, scale: int = 1) -> int:
    return 6 * scale * len(text) - scale if text else 0


def render_heatmap(grid: np.ndarray, db_scale: bool, width: int, height: int) -> RasterImage:
    """Min-max normalized colormap image; matrix row 0 lands at the bottom."""
    grid = np.asarray(grid, dtype=np.float64)
    if db_scale:
        grid = power_to_db(grid)
    lo, hi = float(grid.min()), float(grid.max())
    if hi > lo:
        norm = (grid - lo) / (hi - lo)
    else:
        norm = np.zeros_like(grid)
    idx = np.round(norm * 255.0).astype(np.intp)
    rows, cols = grid.shape
    row_pick = (np.arange(height) * rows) // height
    col_pick = (np.arange(width) * cols) // width
    resized = idx[np.ix_(row_pick, col_pick)]
    pixels = COLORMAP[resized[::-1]]  # flip: low frequency at the bottom
    return RasterImage(width, height, np.ascontiguousarray(pixels))


def render_waveform(audio: AudioBuffer, width: int, height: int) -> RasterImage:
    """Per-column min/max amplitude envelope on white."""
    img = RasterImage.blank(width, height)
    samples = np.clip(audio.samples, -1.0, 1.0)
    n = samples.shape[0]
    for c in range(width):
        lo_i = (c * n) // width
        hi_i = max(((c + 1) * n) // width, lo_i + 1)
        seg = samples[lo_i:hi_i] if lo_i < n else samples[n - 1 :]
        vmin, vmax = float(seg.min()), float(seg.max())
        y_top = int(round((1.0 - (vmax + 1.0) / 2.0) * (height - 1)))
        y_bot = int(round((1.0 - (vmin + 1.0) / 2.0) * (height - 1)))
        img.pixels[y_top : y_bot + 1, c] = WAVEFORM_COLOR
    return img


def format_metrics_line(metrics: QualityMetrics) -> str:
    return (
        f"SNR {metrics.snr_db:.2f} DB   "
        f"WAVE CORR {metrics.waveform_corr:.3f}   "
        f"SPEC CORR {metrics.spectral_corr:.3f}   "
        f"MEL CORR {metrics.mel_corr:.3f}"
    )


def render_comparison(
    original: AudioBuffer,
    synthesized: AudioBuffer,
    original_power: np.ndarray,
    synthesized_power: np.ndarray,
    original_mel: np.ndarray,
    synthesized_mel: np.ndarray,
    metrics: QualityMetrics,
) -> RasterImage:
    """Six-panel figure: waveform / spectrogram dB / mel dB, original vs synthesized."""
    width, height = COMPARISON_SIZE
    img = RasterImage.blank(width, height)
    panel_w = (width - 3 * GUTTER) // 2
    panel_h = (height - STRIP_HEIGHT - 4 * GUTTER) // 3
    col_x = (GUTTER, 2 * GUTTER + panel_w)

    for cx, label in zip(col_x, ("ORIGINAL", "SYNTHESIZED")):
        draw_text(img.pixels, cx + (panel_w - text_width(label, 2)) // 2, 4, label, scale=2)
    line = format_metrics_line(metrics)
    draw_text(img.pixels, (width - text_width(line, 2)) // 2, 22, line, scale=2)

    panels = [
        (render_waveform(original, panel_w, panel_h), render_waveform(synthesized, panel_w, panel_h)),
        (
            render_heatmap(original_power, True, panel_w, panel_h),
            render_heatmap(synthesized_power, True, panel_w, panel_h),
        ),
        (
            render_heatmap(original_mel, True, panel_w, panel_h),
            render_heatmap(synthesized_mel, True, panel_w, panel_h),
        ),
    ]
    for row, (left, right) in enumerate(panels):
        y = STRIP_HEIGHT + GUTTER + row * (panel_h + GUTTER)
        img.pixels[y : y + panel_h, col_x[0] : col_x[0] + panel_w] = left.pixels
        img.pixels[y : y + panel_h, col_x[1] : col_x[1] + panel_w] = right.pixels
    return img


def embedding_bounds(embedding: PairedEmbedding, margin: float = 0.05):
    """Joint bounding box over both point sets, padded by the margin fraction."""
    pts = np.concatenate([embedding.original_points, embedding.synthesized_points])
    xmin, ymin = pts.min(axis=0)
    xmax, ymax = pts.max(axis=0)
    span_x = (xmax - xmin) or 1.0
    span_y = (ymax - ymin) or 1.0
    return (
        xmin - margin * span_x,
        xmax + margin * span_x,
        ymin - margin * span_y,
        ymax + margin * span_y,
    )


def data_to_pixel(bounds, rect, point) -> tuple[int, int]:
    """Affine map from data coordinates into a panel rectangle (y axis up)."""
    xmin, xmax, ymin, ymax = bounds
    x0, y0, w, h = rect
    fx = (point[0] - xmin) / (xmax - xmin)
    fy = (point[1] - ymin) / (ymax - ymin)
    return (
        x0 + int(round(fx * (w - 1))),
        y0 + int(round((1.0 - fy) * (h - 1))),
    )


def _draw_disc(pixels, cx, cy, radius, color):
    h, w = pixels.shape[:2]
    for dy in range(-radius, radius + 1):
        for dx in range(-radius, radius + 1):
            if dx * dx + dy * dy <= radius * radius:
                x, y = cx + dx, cy + dy
                if 0 <= x < w and 0 <= y < h:
                    pixels[y, x] = color


def _draw_line(pixels, p0, p1, color):
    steps = int(max(abs(p1[0] - p0[0]), abs(p1[1] - p0[1]))) + 1
    xs = np.round(np.linspace(p0[0], p1[0], steps)).astype(int)
    ys = np.round(np.linspace(p0[1], p1[1], steps)).astype(int)
    h, w = pixels.shape[:2]
    ok = (xs >= 0) & (xs < w) & (ys >= 0) & (ys < h)
    pixels[ys[ok], xs[ok]] = color


def render_embedding(embedding: PairedEmbedding) -> RasterImage:
    """PCA triptych: original, synthesized, and overlay with pair segments."""
    if embedding.original_points.shape[0] == 0 or embedding.synthesized_points.shape[0] == 0:
        raise EmptyEmbeddingError("embedding has no points")
    width, height = EMBEDDING_SIZE
    img = RasterImage.blank(width, height)
    panel_w = (width - 4 * GUTTER) // 3
    panel_h = height - 2 * GUTTER
    bounds = embedding_bounds(embedding)
    rects = [
        (GUTTER + i * (panel_w + GUTTER), GUTTER, panel_w, panel_h) for i in range(3)
    ]
    labels = ("ORIGINAL", "SYNTHESIZED", "OVERLAY")

    for rect, label in zip(rects, labels):
        x0, y0, w, h = rect
        img.pixels[y0 : y0 + h, x0 : x0 + w] = (250, 250, 250)
        draw_text(img.pixels, x0 + 6, y0 + 6, label, scale=1)

    def scatter(rect, points, color):
        for pt in points:
            px, py = data_to_pixel(bounds, rect, pt)
            _draw_disc(img.pixels, px, py, 3, color)

    scatter(rects[0], embedding.original_points, ORIGINAL_COLOR)
    scatter(rects[1], embedding.synthesized_points, SYNTH_COLOR)
    for i, j in embedding.pairs:
        p0 = data_to_pixel(bounds, rects[2], embedding.original_points[i])
        p1 = data_to_pixel(bounds, rects[2], embedding.synthesized_points[j])
        _draw_line(img.pixels, p0, p1, PAIR_COLOR)
    scatter(rects[2], embedding.original_points, ORIGINAL_COLOR)
    scatter(rects[2], embedding.synthesized_points, SYNTH_COLOR)
    return img
