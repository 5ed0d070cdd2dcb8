"""Birdsong analysis-synthesis toolkit.

Feature extraction (spectral descriptors, pYIN pitch, MFCC), mel-spectrogram
inversion via Griffin-Lim, synthesis quality metrics, PCA feature-space
comparison, 3D trajectory/session export, and a FastAPI service plus CLI.
"""

__version__ = "0.1.0"
