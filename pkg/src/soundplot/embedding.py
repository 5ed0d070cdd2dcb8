"""Joint PCA of original and synthesized MFCC frames into a shared 2D space.

Both frame sets are fitted together so their projections are comparable;
frames at equal indices are paired to expose the synthesis drift.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class PcaModel:
    mean: np.ndarray  # (dims,)
    components: np.ndarray  # (n_components, dims), orthonormal rows
    explained_variance: np.ndarray  # (n_components,), descending
    explained_variance_ratio: np.ndarray


@dataclass
class PairedEmbedding:
    original_points: np.ndarray  # (frames, 2)
    synthesized_points: np.ndarray
    pairs: np.ndarray  # (n_pairs, 2) index pairs at equal frame positions


def fit_pca(frames: np.ndarray, n_components: int = 2) -> PcaModel:
    """Eigendecomposition of the sample covariance of (dims, frames) data.

    Sign convention: each component's largest-magnitude entry is positive,
    which makes repeated fits bit-identical. Zero covariance falls back to
    the leading canonical axes with zero variance.
    """
    frames = np.asarray(frames, dtype=np.float64)
    dims, count = frames.shape
    if count < 2 or dims < n_components:
        raise ValueError("need at least 2 frames and n_components dims")
    mean = frames.mean(axis=1)
    centered = frames - mean[:, None]
    cov = (centered @ centered.T) / (count - 1)
    total_var = float(np.trace(cov))
    # centering constant data leaves ~eps residue, so test against data scale
    degenerate_floor = (1e-12 * max(float(np.max(np.abs(frames))), 1.0)) ** 2
    if total_var <= degenerate_floor:
        components = np.eye(dims)[:n_components]
        zeros = np.zeros(n_components)
        return PcaModel(mean, components, zeros, zeros.copy())
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1][:n_components]
    components = eigvecs[:, order].T
    variance = np.maximum(eigvals[order], 0.0)
    for row in components:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    return PcaModel(mean, components, variance, variance / total_var)


def project(model: PcaModel, frames: np.ndarray) -> np.ndarray:
    """Map (dims, frames) data into component space as (frames, n_components)."""
    frames = np.asarray(frames, dtype=np.float64)
    return (frames - model.mean[:, None]).T @ model.components.T


def joint_embedding(
    mfcc_original: np.ndarray, mfcc_synthesized: np.ndarray
) -> tuple[PcaModel, PairedEmbedding]:
    """Fit on the concatenation of both frame sets, project each, pair by index."""
    model = fit_pca(np.concatenate([mfcc_original, mfcc_synthesized], axis=1))
    pts_orig = project(model, mfcc_original)
    pts_synth = project(model, mfcc_synthesized)
    n_pairs = min(pts_orig.shape[0], pts_synth.shape[0])
    pairs = np.stack([np.arange(n_pairs), np.arange(n_pairs)], axis=1)
    return model, PairedEmbedding(pts_orig, pts_synth, pairs)
