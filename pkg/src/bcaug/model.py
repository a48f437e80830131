"""Logistic prediction and a full-batch gradient-descent trainer.

One trainer serves all three objectives (raw, syn, bc).  The per-sample
gradient of the cross-entropy under a logistic model is x * (sigmoid(x'b) - y);
the bias-corrected objective adds the weighted difference of the
correction-set and synthetic-majority gradient averages, mirroring the sign
of the loss-side correction term.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import expit

from .dataset import Dataset
from .errors import ConfigError, DataError, NumericError
from .loss import EPS_CLIP, AugmentedTrainSet, bce_vec


class DimMismatch(DataError):
    pass


class DivergedToNonFinite(NumericError):
    pass


class BadThreshold(ConfigError):
    pass


OBJECTIVES = ("raw", "syn", "bc")


@dataclass
class LogisticModel:
    """Coefficient vector with sigmoid link; optionally carries an intercept.

    With ``intercept`` set, ``beta`` has one extra trailing entry multiplying
    a constant-1 feature.
    """

    beta: np.ndarray
    intercept: bool = False

    def __post_init__(self):
        self.beta = np.asarray(self.beta, dtype=np.float64).reshape(-1)

    @property
    def n_features(self) -> int:
        return self.beta.size - (1 if self.intercept else 0)

    def _linear(self, x: np.ndarray) -> np.ndarray:
        if x.shape[-1] != self.n_features:
            raise DimMismatch(
                f"model expects {self.n_features} features, got {x.shape[-1]}"
            )
        t = x @ self.beta[: self.n_features]
        if self.intercept:
            t = t + self.beta[-1]
        return t

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        """Probabilities for a matrix of rows; stable for large |x'b|.

        Clamped into (0, 1) so saturated predictions never collapse to an
        exact endpoint.
        """
        p = expit(self._linear(np.asarray(x, dtype=np.float64)))
        return np.clip(p, EPS_CLIP, 1.0 - EPS_CLIP)

    def predict(self, x) -> float:
        """Probability for a single covariate vector."""
        x = np.asarray(x, dtype=np.float64).reshape(1, -1)
        return float(self.predict_proba(x)[0])

    def classify(self, x: np.ndarray, threshold: float = 0.5) -> np.ndarray:
        """Label 1 where the probability reaches the threshold (ties go to 1)."""
        if not 0.0 <= threshold <= 1.0:
            raise BadThreshold(f"threshold {threshold} must be in [0, 1]")
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        return (self.predict_proba(x) >= threshold).astype(np.int64)

    def to_json(self) -> str:
        return json.dumps({"beta": self.beta.tolist(), "intercept": self.intercept})

    @classmethod
    def from_json(cls, text: str) -> "LogisticModel":
        obj = json.loads(text)
        return cls(beta=np.asarray(obj["beta"], dtype=np.float64), intercept=bool(obj["intercept"]))


@dataclass
class TrainConfig:
    epochs: int = 100
    learning_rate: float = 0.1
    init: str = "zeros"  # or "gaussian" (sd 0.01, needs rng)
    grad_tol: Optional[float] = None
    l2: float = 0.0  # off by default; intercept coordinate never penalized

    def __post_init__(self):
        if self.epochs < 1:
            raise ConfigError(f"epochs {self.epochs} must be >= 1")
        if self.learning_rate < 0:
            raise ConfigError(f"learning rate {self.learning_rate} must be >= 0")
        if self.init not in ("zeros", "gaussian"):
            raise ConfigError(f"init {self.init!r} must be 'zeros' or 'gaussian'")
        if self.l2 < 0:
            raise ConfigError("l2 penalty must be >= 0")


def _design(x: np.ndarray, intercept: bool) -> np.ndarray:
    if not intercept:
        return x
    return np.hstack([x, np.ones((x.shape[0], 1))])


class _Blocks:
    """Design-matrix blocks for one objective, shared by loss and gradient."""

    def __init__(self, objective: str, data, intercept: bool):
        if objective not in OBJECTIVES:
            raise ConfigError(f"objective {objective!r} not one of {OBJECTIVES}")
        self.objective = objective
        if objective == "raw":
            if not isinstance(data, Dataset):
                raise DataError("raw objective expects a Dataset")
            raw = data
            self.syn1 = np.empty((0, raw.d))
            self.corr = self.syn0 = None
        else:
            if not isinstance(data, AugmentedTrainSet):
                raise DataError(f"{objective} objective expects an AugmentedTrainSet")
            raw = data.raw
            self.syn1 = data.syn_minority
            if objective == "bc" and self.syn1.shape[0] > 0:
                if data.partition.n0c == 0:
                    raise DataError("bc objective needs a nonempty correction set")
                if data.n_syn_majority == 0:
                    raise DataError("bc objective needs majority synthetics")
                self.corr = _design(raw.x[data.partition.correction_idx], intercept)
                self.syn0 = _design(data.syn_majority, intercept)
            else:
                self.corr = self.syn0 = None
        if raw.n == 0:
            raise DataError("cannot train on an empty dataset")
        self.d_raw = _design(raw.x, intercept)
        self.y_raw = raw.y.astype(np.float64)
        self.d_syn1 = _design(self.syn1, intercept)
        self.n = raw.n
        self.n1t = self.syn1.shape[0]
        self.denom = self.n + self.n1t
        self.p = self.d_raw.shape[1]

    def loss(self, beta: np.ndarray) -> float:
        total = bce_vec(expit(self.d_raw @ beta), self.y_raw).sum()
        if self.n1t:
            total += bce_vec(expit(self.d_syn1 @ beta), 1.0).sum()
        value = total / self.denom
        if self.corr is not None:
            corr_mean = bce_vec(expit(self.corr @ beta), 0.0).mean()
            syn0_mean = bce_vec(expit(self.syn0 @ beta), 0.0).mean()
            value += (self.n1t / self.denom) * (corr_mean - syn0_mean)
        return float(value)

    def grad(self, beta: np.ndarray) -> np.ndarray:
        g = self.d_raw.T @ (expit(self.d_raw @ beta) - self.y_raw)
        if self.n1t:
            g = g + self.d_syn1.T @ (expit(self.d_syn1 @ beta) - 1.0)
        g = g / self.denom
        if self.corr is not None:
            corr_mean = self.corr.T @ expit(self.corr @ beta) / self.corr.shape[0]
            syn0_mean = self.syn0.T @ expit(self.syn0 @ beta) / self.syn0.shape[0]
            g = g + (self.n1t / self.denom) * (corr_mean - syn0_mean)
        return g


def grad_loss(objective: str, model: LogisticModel, data) -> np.ndarray:
    """Exact gradient of the selected objective at the model's coefficients."""
    blocks = _Blocks(objective, data, model.intercept)
    if blocks.p != model.beta.size:
        raise DimMismatch(
            f"model has {model.beta.size} coefficients, design has {blocks.p}"
        )
    return blocks.grad(model.beta)


def objective_loss(objective: str, model: LogisticModel, data) -> float:
    """Value of the selected objective; same formulas the trainer records."""
    blocks = _Blocks(objective, data, model.intercept)
    return blocks.loss(model.beta)


@dataclass
class FitResult:
    model: LogisticModel
    losses: np.ndarray = field(repr=False)

    @property
    def final_loss(self) -> float:
        return float(self.losses[-1])


def fit(
    objective: str,
    data,
    cfg: TrainConfig | None = None,
    intercept: bool = False,
    rng: np.random.Generator | None = None,
) -> FitResult:
    """Full-batch gradient descent for a fixed number of epochs.

    Deterministic given (inputs, cfg, rng).  The recorded trajectory holds
    the objective value at initialization and after every step.
    """
    cfg = cfg or TrainConfig()
    blocks = _Blocks(objective, data, intercept)
    if cfg.init == "zeros":
        beta = np.zeros(blocks.p)
    else:
        if rng is None:
            raise ConfigError("gaussian init requires an rng")
        beta = rng.normal(0.0, 0.01, size=blocks.p)
    n_pen = blocks.p - (1 if intercept else 0)
    losses = [blocks.loss(beta)]
    for _ in range(cfg.epochs):
        g = blocks.grad(beta)
        if cfg.l2:
            g = g.copy()
            g[:n_pen] += 2.0 * cfg.l2 * beta[:n_pen]
        if cfg.grad_tol is not None and float(np.linalg.norm(g)) <= cfg.grad_tol:
            break
        beta = beta - cfg.learning_rate * g
        if not np.isfinite(beta).all():
            raise DivergedToNonFinite("coefficients left the finite range")
        value = blocks.loss(beta)
        if not np.isfinite(value):
            raise DivergedToNonFinite("objective became non-finite")
        losses.append(value)
    return FitResult(LogisticModel(beta, intercept=intercept), np.asarray(losses))
