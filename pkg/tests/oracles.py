"""Slow, obviously-correct reference computations used to pin expected values.

Everything here is deliberately written as direct summations or exhaustive
searches, independent of the library's vectorized implementations.
"""

import itertools
import math

import numpy as np


def naive_dft(frame: np.ndarray, bins: int | None = None) -> np.ndarray:
    """O(n^2) DFT by per-bin summation; returns the nonnegative-frequency half."""
    n = len(frame)
    if bins is None:
        bins = n // 2 + 1
    out = np.empty(bins, dtype=complex)
    idx = np.arange(n)
    for k in range(bins):
        out[k] = np.sum(frame * np.exp(-2j * np.pi * k * idx / n))
    return out


def naive_dct2_ortho(values: np.ndarray) -> np.ndarray:
    """Orthonormal DCT-II of a 1-D vector via the textbook double sum."""
    n = len(values)
    out = np.empty(n)
    for k in range(n):
        acc = 0.0
        for j in range(n):
            acc += values[j] * math.cos(math.pi * (j + 0.5) * k / n)
        scale = math.sqrt(1.0 / n) if k == 0 else math.sqrt(2.0 / n)
        out[k] = scale * acc
    return out


def difference_function_loops(frame: np.ndarray, tau_max: int) -> np.ndarray:
    """YIN difference d(tau) by the O(W*tau) double loop."""
    w = len(frame)
    d = np.zeros(tau_max + 1)
    for tau in range(tau_max + 1):
        acc = 0.0
        for j in range(w - tau):
            diff = frame[j] - frame[j + tau]
            acc += diff * diff
        d[tau] = acc
    return d


def cmndf_prefix_sums(d: np.ndarray) -> np.ndarray:
    """Cumulative mean normalized difference via explicit prefix sums."""
    out = np.ones_like(d)
    running = 0.0
    for tau in range(1, len(d)):
        running += d[tau]
        out[tau] = 1.0 if running == 0.0 else d[tau] * tau / running
    return out


def jacobi_eigh(matrix: np.ndarray, sweeps: int = 50, tol: float = 1e-14):
    """Cyclic Jacobi eigen-decomposition of a symmetric matrix.

    Returns (eigenvalues descending, eigenvectors as rows).
    """
    a = matrix.astype(np.float64).copy()
    n = a.shape[0]
    v = np.eye(n)
    for _ in range(sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off < tol * max(1.0, np.abs(np.diag(a)).max()):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = np.sign(theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                v = v @ rot
    order = np.argsort(np.diag(a))[::-1]
    return np.diag(a)[order], v[:, order].T


def viterbi_enumerate(log_init: np.ndarray, log_trans: np.ndarray, log_obs: np.ndarray):
    """Best state path by scoring every possible path (small instances only)."""
    n_frames, n_states = log_obs.shape
    best_score = -np.inf
    best_path = None
    for path in itertools.product(range(n_states), repeat=n_frames):
        score = log_init[path[0]] + log_obs[0, path[0]]
        for m in range(1, n_frames):
            score += log_trans[path[m - 1], path[m]] + log_obs[m, path[m]]
        if score > best_score:
            best_score = score
            best_path = path
    return np.array(best_path), best_score
