"""Sample containers, class partitioning, splitting, and file ingestion.

The minority class is the label-1 class by convention, independent of which
class happens to be smaller.  All containers are immutable after
construction and safe to share across workers.
"""
from __future__ import annotations

import csv
import struct
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError


class EmptyClass(DataError):
    pass


class InvalidPartitionSize(DataError):
    pass


class BadProbabilities(ConfigError):
    pass


class ParseError(DataError):
    pass


class BadLabel(DataError):
    pass


class IdxFormatError(DataError):
    pass


class CountMismatch(DataError):
    pass


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Dataset:
    """Covariate matrix ``x`` (n rows, d columns) with binary labels ``y``.

    Labels must be exactly 0 or 1.  An empty dataset (n = 0) is allowed so
    that degenerate split configurations remain representable; operations
    that require samples raise on empty input.
    """

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        y = np.asarray(self.y)
        if x.ndim != 2:
            raise DataError(f"covariates must be a 2-d matrix, got ndim={x.ndim}")
        if x.shape[1] < 1:
            raise DataError("covariate matrix needs at least one column")
        if y.ndim != 1 or y.shape[0] != x.shape[0]:
            raise DataError(
                f"label vector length {y.shape} does not match {x.shape[0]} rows"
            )
        if y.size and not np.isin(y, (0, 1)).all():
            raise BadLabel("labels must be exactly 0 or 1")
        object.__setattr__(self, "x", _freeze(x))
        object.__setattr__(self, "y", _freeze(y.astype(np.int64)))

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def d(self) -> int:
        return self.x.shape[1]

    @property
    def n1(self) -> int:
        return int(self.y.sum())

    @property
    def n0(self) -> int:
        return self.n - self.n1

    def subset(self, idx) -> "Dataset":
        return Dataset(self.x[idx], self.y[idx])


@dataclass(frozen=True)
class ClassSplit:
    """Row indices of the minority (y=1) and majority (y=0) classes."""

    minority_idx: np.ndarray
    majority_idx: np.ndarray

    @property
    def n1(self) -> int:
        return self.minority_idx.size

    @property
    def n0(self) -> int:
        return self.majority_idx.size


@dataclass(frozen=True)
class MajorityPartition:
    """Disjoint split of the majority rows into generation and correction sets."""

    generation_idx: np.ndarray
    correction_idx: np.ndarray

    @property
    def n0g(self) -> int:
        return self.generation_idx.size

    @property
    def n0c(self) -> int:
        return self.correction_idx.size


@dataclass(frozen=True)
class TrainValTest:
    train: Dataset
    val: Dataset
    test: Dataset


def split_by_class(d: Dataset) -> ClassSplit:
    """Partition row indices by label; minority is the y=1 class."""
    minority = np.flatnonzero(d.y == 1)
    majority = np.flatnonzero(d.y == 0)
    if minority.size == 0:
        raise EmptyClass("no minority (y=1) samples")
    if majority.size == 0:
        raise EmptyClass("no majority (y=0) samples")
    return ClassSplit(_freeze(minority), _freeze(majority))


def partition_majority(
    split: ClassSplit, n0g: int, rng: np.random.Generator
) -> MajorityPartition:
    """Draw a uniformly random generation set of size ``n0g``; the rest corrects.

    Both subsets must be nonempty, so 1 <= n0g <= n0 - 1.
    """
    n0 = split.n0
    if not 1 <= n0g <= n0 - 1:
        raise InvalidPartitionSize(
            f"generation size {n0g} must be in [1, {n0 - 1}] for n0={n0}"
        )
    perm = rng.permutation(split.majority_idx)
    gen = np.sort(perm[:n0g])
    corr = np.sort(perm[n0g:])
    return MajorityPartition(_freeze(gen), _freeze(corr))


def default_generation_size(n1: int, n0: int) -> int:
    """Generation-set size: match the minority count, capped at half the majority."""
    return min(n1, n0 // 2)


def split_train_val_test(
    d: Dataset,
    probs: tuple[float, float, float] = (0.6, 0.2, 0.2),
    rng: np.random.Generator | None = None,
) -> TrainValTest:
    """Assign each row independently to train/val/test with the given probabilities."""
    p = np.asarray(probs, dtype=float)
    if p.shape != (3,) or (p < 0).any() or abs(p.sum() - 1.0) > 1e-9:
        raise BadProbabilities(f"probabilities {probs} must be nonnegative and sum to 1")
    if rng is None:
        raise ConfigError("split_train_val_test requires a seeded rng")
    u = rng.random(d.n)
    train = u < p[0]
    val = ~train & (u < p[0] + p[1])
    test = ~train & ~val
    return TrainValTest(d.subset(train), d.subset(val), d.subset(test))


def load_csv(path, label_column: str) -> Dataset:
    """Load a numeric CSV with a header row; one column holds the {0,1} labels."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file, header row required") from None
        header = [h.strip() for h in header]
        if label_column not in header:
            raise ParseError(f"{path}: label column {label_column!r} not in header {header}")
        label_pos = header.index(label_column)
        if len(header) < 2:
            raise ParseError(f"{path}: need at least one covariate column")
        xs, ys = [], []
        for r, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ParseError(f"{path}: row {r} has {len(row)} fields, expected {len(header)}")
            feats = []
            for c, field in enumerate(row, start=1):
                if c - 1 == label_pos:
                    if field.strip() not in ("0", "1"):
                        raise BadLabel(f"{path}: row {r} col {c}: label {field!r} not in {{0,1}}")
                    ys.append(int(field))
                else:
                    try:
                        feats.append(float(field))
                    except ValueError:
                        raise ParseError(
                            f"{path}: row {r} col {c}: non-numeric value {field!r}"
                        ) from None
            xs.append(feats)
    if not xs:
        raise ParseError(f"{path}: no data rows")
    return Dataset(np.asarray(xs), np.asarray(ys))


IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801


def _read_idx_images(path) -> np.ndarray:
    with open(path, "rb") as fh:
        head = fh.read(16)
        if len(head) < 16:
            raise IdxFormatError(f"{path}: truncated header")
        magic, count, rows, cols = struct.unpack(">IIII", head)
        if magic != IDX_IMAGES_MAGIC:
            raise IdxFormatError(f"{path}: bad image magic 0x{magic:08x}")
        body = fh.read()
    expected = count * rows * cols
    if len(body) < expected:
        raise IdxFormatError(f"{path}: expected {expected} pixel bytes, got {len(body)}")
    pixels = np.frombuffer(body[:expected], dtype=np.uint8)
    return pixels.reshape(count, rows * cols)


def _read_idx_labels(path) -> np.ndarray:
    with open(path, "rb") as fh:
        head = fh.read(8)
        if len(head) < 8:
            raise IdxFormatError(f"{path}: truncated header")
        magic, count = struct.unpack(">II", head)
        if magic != IDX_LABELS_MAGIC:
            raise IdxFormatError(f"{path}: bad label magic 0x{magic:08x}")
        body = fh.read()
    if len(body) < count:
        raise IdxFormatError(f"{path}: expected {count} label bytes, got {len(body)}")
    return np.frombuffer(body[:count], dtype=np.uint8)


def load_mnist_idx(
    images_path, labels_path, digit_filter, positive_digit: int
) -> Dataset:
    """Load big-endian IDX image/label files into a binary dataset.

    Keeps only digits in ``digit_filter``; y=1 marks ``positive_digit``.
    Pixels are flattened and scaled to [0, 1].
    """
    images = _read_idx_images(images_path)
    labels = _read_idx_labels(labels_path)
    if images.shape[0] != labels.shape[0]:
        raise CountMismatch(
            f"{images.shape[0]} images vs {labels.shape[0]} labels"
        )
    keep = np.isin(labels, sorted(digit_filter))
    if not keep.any():
        raise EmptyClass(f"no rows with digits in {sorted(digit_filter)}")
    x = images[keep].astype(np.float64) / 255.0
    y = (labels[keep] == positive_digit).astype(np.int64)
    return Dataset(x, y)


def subsample_minority(d: Dataset, ratio: float, rng: np.random.Generator) -> Dataset:
    """Subsample the y=1 rows so they make up roughly ``ratio`` of the result."""
    if not 0 < ratio < 1:
        raise ConfigError(f"minority ratio {ratio} must be in (0, 1)")
    split = split_by_class(d)
    target = int(np.floor(ratio / (1.0 - ratio) * split.n0))
    if target < 1:
        raise EmptyClass(f"ratio {ratio} leaves no minority samples")
    if target >= split.n1:
        return d
    chosen = rng.choice(split.minority_idx, size=target, replace=False)
    keep = np.sort(np.concatenate([chosen, split.majority_idx]))
    return d.subset(keep)


def swap_labels(d: Dataset) -> Dataset:
    return Dataset(d.x, 1 - d.y)
