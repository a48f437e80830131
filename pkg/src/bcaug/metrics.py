"""Classification and estimation metrics.

Zero-denominator convention: any metric whose denominator vanishes is 0
(accuracy excepted) and the report's ``degenerate`` flag is set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError


class LengthMismatch(DataError):
    pass


class ShapeMismatch(DataError):
    pass


class NotOrthonormal(DataError):
    pass


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class MetricReport:
    recall: float
    precision: float
    f_beta: float
    f1: float
    jaccard: float
    mcc: float
    fowlkes_mallows: float
    accuracy: float
    beta: float
    degenerate: bool

    COLUMNS = (
        "recall",
        "precision",
        "f_beta",
        "f1",
        "jaccard",
        "mcc",
        "fowlkes_mallows",
        "accuracy",
        "beta",
        "degenerate",
    )

    def to_row(self) -> list:
        return [getattr(self, c) for c in self.COLUMNS]


def confusion(y_true, y_pred) -> ConfusionMatrix:
    """Standard counts with class 1 positive."""
    yt = np.asarray(y_true).reshape(-1)
    yp = np.asarray(y_pred).reshape(-1)
    if yt.shape != yp.shape:
        raise LengthMismatch(f"lengths differ: {yt.shape[0]} vs {yp.shape[0]}")
    if yt.size and (not np.isin(yt, (0, 1)).all() or not np.isin(yp, (0, 1)).all()):
        raise DataError("labels and predictions must be binary")
    tp = int(np.sum((yt == 1) & (yp == 1)))
    fp = int(np.sum((yt == 0) & (yp == 1)))
    fn = int(np.sum((yt == 1) & (yp == 0)))
    tn = int(np.sum((yt == 0) & (yp == 0)))
    return ConfusionMatrix(tp, fp, fn, tn)


def _ratio(num: float, den: float, flags: list) -> float:
    if den == 0:
        flags.append(True)
        return 0.0
    return num / den


def compute_metrics(cm: ConfusionMatrix, beta: float = 1.0) -> MetricReport:
    if beta <= 0:
        raise ConfigError(f"beta {beta} must be positive")
    tp, fp, fn, tn = float(cm.tp), float(cm.fp), float(cm.fn), float(cm.tn)
    flags: list = []
    recall = _ratio(tp, tp + fn, flags)
    precision = _ratio(tp, tp + fp, flags)
    f1 = _ratio(2.0 * precision * recall, precision + recall, flags)
    b2 = beta * beta
    f_beta = _ratio((1.0 + b2) * precision * recall, b2 * precision + recall, flags)
    jaccard = _ratio(tp, tp + fp + fn, flags)
    mcc_den = math.sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn))
    mcc = _ratio(tp * tn - fp * fn, mcc_den, flags)
    fowlkes_mallows = math.sqrt(precision * recall)
    accuracy = _ratio(tp + tn, cm.total, flags)
    return MetricReport(
        recall=recall,
        precision=precision,
        f_beta=f_beta,
        f1=f1,
        jaccard=jaccard,
        mcc=mcc,
        fowlkes_mallows=fowlkes_mallows,
        accuracy=accuracy,
        beta=beta,
        degenerate=bool(flags),
    )


def beta_mse(beta_hat, beta_true) -> float:
    """Squared L2 error of a coefficient estimate for one replicate."""
    bh = np.asarray(beta_hat, dtype=np.float64).reshape(-1)
    bt = np.asarray(beta_true, dtype=np.float64).reshape(-1)
    if bh.shape != bt.shape:
        raise ShapeMismatch(f"dims differ: {bh.shape[0]} vs {bt.shape[0]}")
    diff = bh - bt
    return float(diff @ diff)


def _check_orthonormal(u: np.ndarray, name: str) -> None:
    gram = u.T @ u
    if np.max(np.abs(gram - np.eye(u.shape[1]))) > 1e-8:
        raise NotOrthonormal(f"{name} columns are not orthonormal within 1e-8")


def sin_theta_distance(u_hat, u) -> float:
    """Frobenius norm of the principal-angle sines between two column spans.

    Computed as sqrt(r - ||U' U_hat||_F^2), clamped at 0 against rounding.
    Invariant under right-rotation of either argument.
    """
    a = np.asarray(u_hat, dtype=np.float64)
    b = np.asarray(u, dtype=np.float64)
    if a.ndim == 1:
        a = a[:, None]
    if b.ndim == 1:
        b = b[:, None]
    if a.shape != b.shape:
        raise ShapeMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    _check_orthonormal(a, "first argument")
    _check_orthonormal(b, "second argument")
    r = a.shape[1]
    overlap = float(np.sum((b.T @ a) ** 2))
    return math.sqrt(max(r - overlap, 0.0))
