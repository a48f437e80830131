"""Average-treatment-effect estimation with augmented inverse propensity
weighting.

Outcome means are fit per arm by ordinary least squares on the covariates
(with intercept); the propensity is a logistic fit of the treatment
indicator, trained with any of the raw/syn/bc objectives.  Treatment is the
minority label when synthetics are involved.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .dataset import Dataset
from .errors import ConfigError, DataError, NumericError
from .model import LogisticModel, TrainConfig
from .pipeline import fit_method


class SingularDesign(NumericError):
    pass


class BadClip(ConfigError):
    pass


@dataclass(frozen=True)
class CausalDataset:
    """Covariates, binary treatment indicators, and observed outcomes."""

    x: np.ndarray
    z: np.ndarray
    y_obs: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        z = np.asarray(self.z)
        y = np.asarray(self.y_obs, dtype=np.float64)
        if x.ndim != 2:
            raise DataError("covariates must be a 2-d matrix")
        n = x.shape[0]
        if z.shape != (n,) or y.shape != (n,):
            raise DataError("treatment and outcome lengths must match the rows")
        if not np.isin(z, (0, 1)).all():
            raise DataError("treatment indicators must be 0 or 1")
        if z.sum() == 0 or z.sum() == n:
            raise DataError("both treatment arms must be nonempty")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z.astype(np.int64))
        object.__setattr__(self, "y_obs", y)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def d(self) -> int:
        return self.x.shape[1]


def _ols(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    design = np.hstack([x, np.ones((x.shape[0], 1))])
    rows, cols = design.shape
    sv = np.linalg.svd(design, compute_uv=False)
    if rows < cols or sv[-1] <= 1e-10 * sv[0]:
        raise SingularDesign(
            f"design with {rows} rows and {cols} columns is rank deficient"
        )
    gram = design.T @ design
    rhs = design.T @ y
    try:
        return cho_solve(cho_factor(gram), rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularDesign(str(exc)) from exc


def fit_outcome_models(cd: CausalDataset) -> tuple[np.ndarray, np.ndarray]:
    """Per-arm least-squares coefficients (covariates first, intercept last)."""
    treated = cd.z == 1
    beta1 = _ols(cd.x[treated], cd.y_obs[treated])
    beta0 = _ols(cd.x[~treated], cd.y_obs[~treated])
    return beta1, beta0


def linear_predict(x: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """Evaluate an OLS fit (intercept stored last) on covariate rows."""
    x = np.asarray(x, dtype=np.float64)
    return x @ beta[:-1] + beta[-1]


def fit_propensity(
    cd: CausalDataset,
    variant: str,
    generator=None,
    cfg: TrainConfig | None = None,
    rng: np.random.Generator | None = None,
) -> LogisticModel:
    """Logistic fit of treatment on covariates under the chosen objective."""
    n1 = int(cd.z.sum())
    if variant in ("syn", "bc") and not n1 < cd.n - n1:
        raise DataError("treated group must be the minority for syn/bc variants")
    data = Dataset(cd.x, cd.z)
    return fit_method(variant, data, cfg, generator=generator, rng=rng).model


@dataclass(frozen=True)
class AipwResult:
    tau_hat: float
    mu1_hat_bar: float
    mu0_hat_bar: float
    propensity_variant: str
    clip_eta: float


def aipw(
    cd: CausalDataset,
    mu1,
    mu0,
    e,
    clip_eta: float = 0.01,
    propensity_variant: str = "",
) -> AipwResult:
    """Augmented inverse propensity weighting estimate of the ATE.

    ``mu1``, ``mu0`` and ``e`` are callables on the covariate matrix; the
    propensity is clamped into [clip_eta, 1 - clip_eta] to enforce overlap.
    """
    if not 0.0 < clip_eta < 0.5:
        raise BadClip(f"clip {clip_eta} must be in (0, 0.5)")
    ehat = np.clip(np.asarray(e(cd.x), dtype=np.float64), clip_eta, 1.0 - clip_eta)
    m1 = np.asarray(mu1(cd.x), dtype=np.float64)
    m0 = np.asarray(mu0(cd.x), dtype=np.float64)
    z = cd.z.astype(np.float64)
    y = cd.y_obs
    mu1_bar = float(np.mean(z * (y - m1) / ehat + m1))
    mu0_bar = float(np.mean((1.0 - z) * (y - m0) / (1.0 - ehat) + m0))
    return AipwResult(mu1_bar - mu0_bar, mu1_bar, mu0_bar, propensity_variant, clip_eta)
