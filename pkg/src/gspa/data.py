"""Dataset utilities for the desk-scale private training experiments.

Datasets are dense numeric matrices: one row per sample, features first and
an integer class label in the last column.  A loader for the big-endian IDX
image/label format is provided as an optional path for external digit data.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Dataset",
    "Pca",
    "load_dense_matrix",
    "load_idx",
    "make_blobs",
    "save_dense_matrix",
]


@dataclass(frozen=True)
class Dataset:
    """Train/test split of a labelled numeric dataset."""

    x_train: np.ndarray
    y_train: np.ndarray
    x_test: np.ndarray
    y_test: np.ndarray

    def __post_init__(self):
        if self.x_train.shape[0] != self.y_train.shape[0]:
            raise ValueError("train features and labels disagree in length")
        if self.x_test.shape[0] != self.y_test.shape[0]:
            raise ValueError("test features and labels disagree in length")

    @property
    def num_classes(self) -> int:
        return int(max(self.y_train.max(), self.y_test.max())) + 1

    @property
    def dim(self) -> int:
        return self.x_train.shape[1]


def make_blobs(n_train: int, n_test: int, dim: int = 20, separation: float = 6.0,
               seed=0) -> Dataset:
    """Two spherical Gaussian classes with mean distance ``separation``.

    Labels alternate deterministically so both splits are exactly balanced.
    """
    rng = np.random.default_rng(seed)
    direction = rng.normal(size=dim)
    direction /= np.linalg.norm(direction)
    offset = 0.5 * separation * direction

    def draw(count):
        labels = np.arange(count) % 2
        x = rng.normal(size=(count, dim))
        x += np.where(labels[:, None] == 1, offset, -offset)
        return x, labels

    x_train, y_train = draw(n_train)
    x_test, y_test = draw(n_test)
    return Dataset(x_train, y_train, x_test, y_test)


def save_dense_matrix(path, x: np.ndarray, y: np.ndarray) -> None:
    """Write samples as rows of floats with the integer label last."""
    matrix = np.column_stack([x, y])
    header = "rows = samples; columns = features..., integer label last"
    np.savetxt(path, matrix, header=header)


def load_dense_matrix(path):
    """Read a dense matrix file written by :func:`save_dense_matrix`."""
    matrix = np.loadtxt(path)
    if matrix.ndim != 2 or matrix.shape[1] < 2:
        raise ValueError("dense matrix file needs >= 2 columns (features + label)")
    labels = matrix[:, -1]
    rounded = np.rint(labels)
    if np.abs(labels - rounded).max() > 1e-9 or rounded.min() < 0:
        raise ValueError("last column must hold non-negative integer labels")
    return matrix[:, :-1], rounded.astype(int)


_IDX_IMAGES_MAGIC = 2051
_IDX_LABELS_MAGIC = 2049


def load_idx(images_path, labels_path):
    """Read the standard big-endian IDX image/label pair; pixels scaled to [0, 1]."""
    raw = Path(images_path).read_bytes()
    magic, count, rows, cols = struct.unpack(">iiii", raw[:16])
    if magic != _IDX_IMAGES_MAGIC:
        raise ValueError(f"bad image magic {magic}, expected {_IDX_IMAGES_MAGIC}")
    images = np.frombuffer(raw, dtype=np.uint8, offset=16)
    if images.size != count * rows * cols:
        raise ValueError("image payload size disagrees with the header")
    x = images.reshape(count, rows * cols).astype(float) / 255.0

    raw = Path(labels_path).read_bytes()
    magic, label_count = struct.unpack(">ii", raw[:8])
    if magic != _IDX_LABELS_MAGIC:
        raise ValueError(f"bad label magic {magic}, expected {_IDX_LABELS_MAGIC}")
    if label_count != count:
        raise ValueError("image and label counts disagree")
    y = np.frombuffer(raw, dtype=np.uint8, offset=8).astype(int)
    return x, y


class Pca:
    """Principal components by SVD of the centered training matrix."""

    def __init__(self, x: np.ndarray, components: int):
        if not 1 <= components <= x.shape[1]:
            raise ValueError(f"components must lie in [1, {x.shape[1]}]")
        self.mean = x.mean(axis=0)
        _, _, vt = np.linalg.svd(x - self.mean, full_matrices=False)
        self.basis = vt[:components].T

    def transform(self, x: np.ndarray) -> np.ndarray:
        return (x - self.mean) @ self.basis
