"""Data-generating processes for the simulation studies.

Each variant draws labels first, then covariates conditional on the class.
An empty class triggers one resample of the label vector before failing, so
silent retry loops cannot distort the marginal class probability.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from ..ate import CausalDataset
from ..dataset import Dataset
from ..errors import ConfigError, DataError
from .dists import Dist, parse_dist, sample_array


class DegenerateDraw(DataError):
    pass


def _as_dist(dist) -> Dist:
    return parse_dist(dist) if isinstance(dist, str) else dist


@dataclass(frozen=True)
class MeanShiftDgp:
    """Majority covariates i.i.d. from a base law; minority adds a constant shift."""

    base_dist: Dist | str = "normal(0,1)"
    shift: float = 1.0
    pi1: float = 0.01
    n: int = 10000
    d: int = 10

    def __post_init__(self):
        if not 0 < self.pi1 <= 0.5:
            raise ConfigError(f"pi1 {self.pi1} must be in (0, 0.5]")
        if self.n < 1 or self.d < 1:
            raise ConfigError("n and d must be positive")

    def minority_draws(self, m: int, rng: np.random.Generator) -> np.ndarray:
        """Fresh draws from the minority law (oracle use)."""
        x = sample_array(_as_dist(self.base_dist), (m, self.d), rng)
        return x + self.shift


@dataclass(frozen=True)
class SigmoidBernoulliDgp:
    """Covariates i.i.d.; labels Bernoulli with logistic success probability."""

    cov_dist: Dist | str = "normal(0.5,1)"
    beta_true: np.ndarray = field(default=None)
    n: int = 1000
    d: int = 10

    def __post_init__(self):
        beta = self.beta_true
        if beta is None:
            beta = np.full(self.d, -0.5)
        beta = np.asarray(beta, dtype=np.float64).reshape(-1)
        if beta.size != self.d:
            raise ConfigError(f"beta_true has {beta.size} entries, d={self.d}")
        object.__setattr__(self, "beta_true", beta)


@dataclass(frozen=True)
class NonLinear2dDgp:
    """Four fixed two-dimensional geometries with non-convex or high-variance classes.

    1: concentric rings (classes at different radii)
    2: offset blobs, minority variance 5x the majority
    3: half moons, non-convex majority
    4: majority annulus with the minority blob inside the hole
    """

    scenario: int = 1
    pi1: float = 0.1
    n: int = 2000
    noise: float = 0.2

    def __post_init__(self):
        if self.scenario not in (1, 2, 3, 4):
            raise ConfigError(f"scenario {self.scenario} must be 1..4")
        if not 0 < self.pi1 <= 0.5:
            raise ConfigError(f"pi1 {self.pi1} must be in (0, 0.5]")


@dataclass(frozen=True)
class CausalDgp:
    """Covariates i.i.d.; treatment via a logistic propensity with tuned intercept.

    Potential outcomes are linear in the covariates with a constant additive
    effect; the intercept of the propensity is solved so the expected treated
    fraction matches ``treated_frac`` on the realized covariates.
    """

    cov_dist: Dist | str = "t(6)"
    gamma: np.ndarray = field(default=None)
    beta1: np.ndarray = field(default=None)
    beta0: np.ndarray = field(default=None)
    tau_true: float = 1.0
    treated_frac: float = 0.1
    noise_sd: float = 1.0
    n: int = 2000
    d: int = 5

    def __post_init__(self):
        def default(v, fill):
            if v is None:
                return np.full(self.d, fill)
            arr = np.asarray(v, dtype=np.float64).reshape(-1)
            if arr.size != self.d:
                raise ConfigError(f"vector has {arr.size} entries, d={self.d}")
            return arr

        object.__setattr__(self, "gamma", default(self.gamma, 0.5))
        object.__setattr__(self, "beta1", default(self.beta1, 1.0))
        object.__setattr__(self, "beta0", default(self.beta0, 1.0))
        if not 0 < self.treated_frac < 0.5:
            raise ConfigError(f"treated fraction {self.treated_frac} must be in (0, 0.5)")


@dataclass(frozen=True)
class CausalTrial:
    data: CausalDataset
    gamma0: float
    dgp: CausalDgp

    def true_propensity(self, x: np.ndarray) -> np.ndarray:
        return expit(np.asarray(x) @ self.dgp.gamma + self.gamma0)


def _labels_with_retry(draw_labels, rng: np.random.Generator) -> np.ndarray:
    y = draw_labels(rng)
    if 0 < y.sum() < y.size:
        return y
    y = draw_labels(rng)
    if 0 < y.sum() < y.size:
        return y
    raise DegenerateDraw("a class came up empty twice in a row")


def _generate_mean_shift(dgp: MeanShiftDgp, rng) -> Dataset:
    y = _labels_with_retry(lambda r: (r.random(dgp.n) < dgp.pi1).astype(np.int64), rng)
    x = sample_array(_as_dist(dgp.base_dist), (dgp.n, dgp.d), rng)
    x[y == 1] += dgp.shift
    return Dataset(x, y)


def _generate_sigmoid(dgp: SigmoidBernoulliDgp, rng) -> Dataset:
    x = sample_array(_as_dist(dgp.cov_dist), (dgp.n, dgp.d), rng)
    p = expit(x @ dgp.beta_true)
    y = _labels_with_retry(lambda r: (r.random(dgp.n) < p).astype(np.int64), rng)
    return Dataset(x, y)


def _ring(rng, m: int, radius: float, sd: float) -> np.ndarray:
    angle = rng.random(m) * 2.0 * np.pi
    r = rng.normal(radius, sd, size=m)
    return np.column_stack([r * np.cos(angle), r * np.sin(angle)])


def _generate_nonlinear(dgp: NonLinear2dDgp, rng) -> Dataset:
    y = _labels_with_retry(lambda r: (r.random(dgp.n) < dgp.pi1).astype(np.int64), rng)
    n1 = int(y.sum())
    n0 = dgp.n - n1
    s = dgp.scenario
    if s == 1:
        maj = _ring(rng, n0, 2.0, dgp.noise)
        mino = _ring(rng, n1, 1.0, dgp.noise)
    elif s == 2:
        maj = rng.normal(0.0, 1.0, size=(n0, 2))
        mino = np.array([2.5, 0.0]) + rng.normal(0.0, np.sqrt(5.0), size=(n1, 2))
    elif s == 3:
        t0 = rng.random(n0) * np.pi
        maj = np.column_stack([np.cos(t0), np.sin(t0)]) + rng.normal(
            0.0, dgp.noise, size=(n0, 2)
        )
        t1 = rng.random(n1) * np.pi
        mino = np.column_stack([1.0 - np.cos(t1), 0.5 - np.sin(t1)]) + rng.normal(
            0.0, dgp.noise, size=(n1, 2)
        )
    else:
        maj = _ring(rng, n0, 2.0, dgp.noise)
        mino = rng.normal(0.0, 0.5, size=(n1, 2))
    x = np.empty((dgp.n, 2))
    x[y == 0] = maj
    x[y == 1] = mino
    return Dataset(x, y)


def _solve_gamma0(lin: np.ndarray, target: float) -> float:
    lo, hi = -50.0, 50.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if float(np.mean(expit(lin + mid))) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _generate_causal(dgp: CausalDgp, rng) -> CausalTrial:
    x = sample_array(_as_dist(dgp.cov_dist), (dgp.n, dgp.d), rng)
    lin = x @ dgp.gamma
    gamma0 = _solve_gamma0(lin, dgp.treated_frac)
    e_star = expit(lin + gamma0)

    def draw(r):
        return (r.random(dgp.n) < e_star).astype(np.int64)

    z = _labels_with_retry(draw, rng)
    noise1 = rng.normal(0.0, dgp.noise_sd, size=dgp.n)
    noise0 = rng.normal(0.0, dgp.noise_sd, size=dgp.n)
    y1 = x @ dgp.beta1 + dgp.tau_true + noise1
    y0 = x @ dgp.beta0 + noise0
    y_obs = np.where(z == 1, y1, y0)
    return CausalTrial(CausalDataset(x, z, y_obs), gamma0, dgp)


@dataclass(frozen=True)
class PlantedSubspaceDgp:
    """Multi-task logistic model with coefficients in a shared low-rank subspace.

    Task coefficients are beta_k = B alpha_k with orthonormal B (d x r) and
    unit-direction alpha_k of common norm; the covariate mean points against
    the shared direction so every task is imbalanced.  ``mean_skew`` mixes a
    direction orthogonal to span(B) into the covariate mean, so estimator
    biases acquire an out-of-plane component the subspace metric can see.
    """

    d: int = 6
    k_tasks: int = 6
    r: int = 2
    n_per_task: int = 5000
    coef_norm: float = 1.2
    mean_scale: float = 2.0
    angle_spread: float = 0.7
    mean_skew: float = 0.0

    def draw(self, rng: np.random.Generator) -> tuple[list[Dataset], np.ndarray, np.ndarray]:
        """Return (tasks, true coefficient matrix, true subspace basis)."""
        g = rng.standard_normal((self.d, self.r + 1))
        q, rr = np.linalg.qr(g)
        q = q * np.sign(np.diag(rr))
        b = q[:, : self.r]
        off_plane = q[:, self.r]
        angles = np.linspace(-self.angle_spread, self.angle_spread, self.k_tasks)
        alphas = np.ones((self.r, self.k_tasks))
        alphas[0] = np.cos(angles)
        for j in range(1, self.r):
            alphas[j] = np.sin(j * angles)
        alphas = alphas / np.linalg.norm(alphas, axis=0)
        m_true = self.coef_norm * (b @ alphas)
        mean_dir = b[:, 0] + self.mean_skew * off_plane
        mean_dir = mean_dir / np.linalg.norm(mean_dir)
        mean = -self.mean_scale * mean_dir
        tasks = []
        for k in range(self.k_tasks):
            x = mean + rng.standard_normal((self.n_per_task, self.d))
            p = expit(x @ m_true[:, k])
            y = _labels_with_retry(lambda r_: (r_.random(self.n_per_task) < p).astype(np.int64), rng)
            tasks.append(Dataset(x, y))
        return tasks, m_true, b


def generate(dgp, rng: np.random.Generator):
    """Dispatch a DGP to its sampler."""
    if isinstance(dgp, MeanShiftDgp):
        return _generate_mean_shift(dgp, rng)
    if isinstance(dgp, SigmoidBernoulliDgp):
        return _generate_sigmoid(dgp, rng)
    if isinstance(dgp, NonLinear2dDgp):
        return _generate_nonlinear(dgp, rng)
    if isinstance(dgp, CausalDgp):
        return _generate_causal(dgp, rng)
    raise ConfigError(f"unknown DGP {type(dgp).__name__}")
