"""Binary cross-entropy primitives and the four empirical training objectives.

The raw objective averages the loss over the observed samples.  The
synthetic objective adds minority synthetics labeled 1.  The bias-corrected
objective further shifts the synthetic minority average by the majority
correction term: the held-out majority average minus the synthetic majority
average.  The balanced objective and the minority correction term need fresh
draws from the true minority distribution and exist for verification only.

Models are anything exposing ``predict_proba(x_matrix) -> probabilities``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, MajorityPartition
from .errors import DataError, NumericError

EPS_CLIP = 1e-12


class NonFinite(NumericError):
    pass


class EmptyCorrectionSet(DataError):
    pass


class EmptySynthetic(DataError):
    pass


def bce_vec(p: np.ndarray, y) -> np.ndarray:
    """Elementwise cross-entropy with probabilities clamped away from {0, 1}."""
    p = np.asarray(p, dtype=np.float64)
    if np.isnan(p).any():
        raise NonFinite("probability is NaN")
    pc = np.clip(p, EPS_CLIP, 1.0 - EPS_CLIP)
    y = np.asarray(y, dtype=np.float64)
    return -(y * np.log(pc) + (1.0 - y) * np.log1p(-pc))


def bce(p: float, y: int) -> float:
    """Cross-entropy of a single prediction; finite for any p in [0, 1]."""
    return float(bce_vec(np.asarray([p]), np.asarray([y]))[0])


@dataclass(frozen=True)
class AugmentedTrainSet:
    """Raw samples plus minority synthetics and the majority correction pieces.

    ``syn_minority`` rows carry implicit label 1, ``syn_majority`` rows
    implicit label 0, and ``syn_majority`` must originate from the
    partition's generation rows only.
    """

    raw: Dataset
    syn_minority: np.ndarray
    syn_majority: np.ndarray
    partition: MajorityPartition

    def __post_init__(self):
        syn1 = np.asarray(self.syn_minority, dtype=np.float64).reshape(-1, self.raw.d)
        syn0 = np.asarray(self.syn_majority, dtype=np.float64).reshape(-1, self.raw.d)
        part = self.partition
        gen, corr = part.generation_idx, part.correction_idx
        if np.intersect1d(gen, corr).size:
            raise DataError("generation and correction sets overlap")
        both = np.concatenate([gen, corr])
        if both.size and (self.raw.y[both] != 0).any():
            raise DataError("majority partition contains minority rows")
        object.__setattr__(self, "syn_minority", syn1)
        object.__setattr__(self, "syn_majority", syn0)

    @property
    def n_syn_minority(self) -> int:
        return self.syn_minority.shape[0]

    @property
    def n_syn_majority(self) -> int:
        return self.syn_majority.shape[0]


def _sum_bce(model, x: np.ndarray, label) -> float:
    if x.shape[0] == 0:
        return 0.0
    return float(bce_vec(model.predict_proba(x), label).sum())


def loss_raw(model, data: Dataset) -> float:
    """Average cross-entropy over the observed samples."""
    if data.n == 0:
        raise DataError("cannot evaluate loss on an empty dataset")
    return _sum_bce(model, data.x, data.y) / data.n


def loss_syn(model, aug: AugmentedTrainSet) -> float:
    """Average over raw samples plus minority synthetics labeled 1."""
    n, n1t = aug.raw.n, aug.n_syn_minority
    total = _sum_bce(model, aug.raw.x, aug.raw.y) + _sum_bce(model, aug.syn_minority, 1.0)
    return total / (n + n1t)


def delta0_hat(model, aug: AugmentedTrainSet) -> float:
    """Majority bias term: correction-set average minus synthetic-majority average.

    Sign is kept; a negative value pulls the corrected loss below the
    synthetic loss by design.
    """
    if aug.partition.n0c == 0:
        raise EmptyCorrectionSet("correction set is empty")
    if aug.n_syn_majority == 0:
        raise EmptySynthetic("no majority synthetics")
    corr_x = aug.raw.x[aug.partition.correction_idx]
    corr_mean = _sum_bce(model, corr_x, 0.0) / aug.partition.n0c
    syn_mean = _sum_bce(model, aug.syn_majority, 0.0) / aug.n_syn_majority
    return corr_mean - syn_mean


def loss_bc(model, aug: AugmentedTrainSet) -> float:
    """Synthetic objective shifted by the weighted majority bias term."""
    n, n1t = aug.raw.n, aug.n_syn_minority
    base = loss_syn(model, aug)
    if n1t == 0:
        return base
    return base + (n1t / (n + n1t)) * delta0_hat(model, aug)


def delta1_hat_oracle(model, true_minority_draws, syn_minority) -> float:
    """Minority bias term computed with fresh true-distribution draws.

    Unobservable in deployment; used to verify that the majority term tracks
    it and that synthetic bias scales the way theory predicts.
    """
    true_x = np.asarray(true_minority_draws, dtype=np.float64)
    syn_x = np.asarray(syn_minority, dtype=np.float64)
    if true_x.shape[0] == 0 or syn_x.shape[0] == 0:
        raise DataError("both true draws and synthetics must be nonempty")
    true_mean = _sum_bce(model, true_x, 1.0) / true_x.shape[0]
    syn_mean = _sum_bce(model, syn_x, 1.0) / syn_x.shape[0]
    return true_mean - syn_mean


def loss_balanced_oracle(model, raw: Dataset, true_minority_draws) -> float:
    """Average over observed samples plus fresh true minority draws labeled 1."""
    star = np.asarray(true_minority_draws, dtype=np.float64)
    n_star = star.shape[0]
    total = _sum_bce(model, raw.x, raw.y) + _sum_bce(model, star, 1.0)
    return total / (raw.n + n_star)


def gap_delta(model, aug: AugmentedTrainSet, true_minority_draws) -> float:
    """|minority bias - majority bias|, the quantity the correction relies on."""
    d1 = delta1_hat_oracle(model, true_minority_draws, aug.syn_minority)
    d0 = delta0_hat(model, aug)
    return abs(d1 - d0)
