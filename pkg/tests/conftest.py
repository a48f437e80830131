import struct

import numpy as np
import pytest

from bcaug.dataset import Dataset, MajorityPartition, partition_majority, split_by_class
from bcaug.loss import AugmentedTrainSet


class ConstantModel:
    """Predicts the same probability for every row."""

    def __init__(self, p: float):
        self.p = float(p)

    def predict_proba(self, x):
        return np.full(np.asarray(x).shape[0], self.p)


def make_augmented(
    rng: np.random.Generator,
    n1: int = 12,
    n0: int = 40,
    d: int = 3,
    n_syn1: int | None = None,
    n_syn0: int | None = None,
    syn_offset: float = 0.0,
) -> AugmentedTrainSet:
    """Random augmented train set; synthetics are fresh draws plus an offset."""
    x = np.vstack(
        [rng.normal(1.0, 1.0, size=(n1, d)), rng.normal(0.0, 1.0, size=(n0, d))]
    )
    y = np.concatenate([np.ones(n1, dtype=int), np.zeros(n0, dtype=int)])
    data = Dataset(x, y)
    split = split_by_class(data)
    part = partition_majority(split, max(1, n0 // 3), rng)
    if n_syn1 is None:
        n_syn1 = n0 - n1
    if n_syn0 is None:
        n_syn0 = n_syn1
    syn1 = rng.normal(1.0, 1.0, size=(n_syn1, d)) + syn_offset
    syn0 = rng.normal(0.0, 1.0, size=(n_syn0, d)) + syn_offset
    return AugmentedTrainSet(data, syn1, syn0, part)


def copy_correction_augmented(rng, n1=8, n0=20, d=3) -> AugmentedTrainSet:
    """Augmented set whose majority synthetics copy the correction rows exactly."""
    x = np.vstack(
        [rng.normal(1.0, 1.0, size=(n1, d)), rng.normal(0.0, 1.0, size=(n0, d))]
    )
    y = np.concatenate([np.ones(n1, dtype=int), np.zeros(n0, dtype=int)])
    data = Dataset(x, y)
    split = split_by_class(data)
    part = partition_majority(split, n0 // 2, rng)
    syn1 = rng.normal(1.0, 1.0, size=(n0 - n1, d))
    syn0 = data.x[part.correction_idx].copy()
    return AugmentedTrainSet(data, syn1, syn0, part)


def write_idx_pair(tmp_path, images: np.ndarray, labels: np.ndarray):
    """Write a (count, 28, 28)-style IDX image/label pair; returns the paths."""
    count, rows, cols = images.shape
    img_path = tmp_path / "images.idx"
    lab_path = tmp_path / "labels.idx"
    with open(img_path, "wb") as fh:
        fh.write(struct.pack(">IIII", 0x00000803, count, rows, cols))
        fh.write(images.astype(np.uint8).tobytes())
    with open(lab_path, "wb") as fh:
        fh.write(struct.pack(">II", 0x00000801, count))
        fh.write(labels.astype(np.uint8).tobytes())
    return img_path, lab_path


def synthetic_digits(rng: np.random.Generator, count: int, side: int = 28):
    """Learnable fake digit images: each class lights its own block pattern.

    Returns (images uint8 (count, side, side), labels uint8 in 0..4).
    """
    labels = rng.integers(0, 5, size=count)
    images = rng.integers(0, 40, size=(count, side, side))
    block = side // 5
    for i, digit in enumerate(labels):
        r0 = int(digit) * block
        images[i, r0 : r0 + block, :] += 150
        images[i, :, r0 : r0 + block] += 60
    return np.clip(images, 0, 255).astype(np.uint8), labels.astype(np.uint8)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
