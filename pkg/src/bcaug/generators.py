"""Synthetic-sample producers behind one interface.

Every generator consumes a covariate matrix from a single class and emits
``m`` synthetic covariates with the same number of columns.  Generators are
class-agnostic: the same object serves minority and majority generation.
All randomness flows through the supplied ``numpy.random.Generator``, so
outputs are deterministic given the seed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError, NumericError


class TooFewSamples(DataError):
    pass


class BadK(ConfigError):
    pass


def _check_source(source, min_rows: int) -> np.ndarray:
    src = np.asarray(source, dtype=np.float64)
    if src.ndim != 2:
        raise DataError(f"source must be a 2-d matrix, got ndim={src.ndim}")
    if src.shape[0] < min_rows:
        raise TooFewSamples(f"need at least {min_rows} source rows, got {src.shape[0]}")
    return src


def _neighbor_order(src: np.ndarray) -> np.ndarray:
    """Per-row neighbor indices sorted by Euclidean distance, self excluded.

    Exact brute force; ties break deterministically toward the smaller index.
    """
    sq = np.sum(src**2, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (src @ src.T)
    np.fill_diagonal(d2, np.inf)
    return np.argsort(d2, axis=1, kind="stable")


def _smote_core(source, m: int, k: int, rng, u_draw) -> np.ndarray:
    src = _check_source(source, 2)
    n = src.shape[0]
    if not 1 <= k <= n - 1:
        raise BadK(f"k={k} must be in [1, {n - 1}] for {n} source rows")
    order = _neighbor_order(src)
    t = rng.integers(0, n, size=m)
    u = u_draw(rng, m)
    kk = rng.integers(0, k, size=m)
    base = src[t]
    neigh = src[order[t, kk]]
    return base + u[:, None] * (neigh - base)


def smote_generate(source, m: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """Interpolate between each picked row and one of its k nearest neighbors.

    Each synthetic is X_t + U * (X_neighbor - X_t) with the anchor t uniform
    over the source rows, U uniform on (0, 1), and the neighbor uniform over
    the anchor's k nearest rows.
    """
    return _smote_core(source, m, k, rng, lambda r, size: r.random(size))


def biased_smote_generate(source, m: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """SMOTE with U drawn from Unif(0.5, 1.5), extrapolating past the neighbor.

    Deliberately distorts the synthetic distribution; used as a low-quality
    generator baseline.
    """
    return _smote_core(source, m, k, rng, lambda r, size: r.uniform(0.5, 1.5, size))


def gaussian_generate(source, m: int, rng: np.random.Generator) -> np.ndarray:
    """Draw from a single Gaussian fit to the source (mean and sample covariance)."""
    src = _check_source(source, 2)
    d = src.shape[1]
    mu = src.mean(axis=0)
    cov = np.atleast_2d(np.cov(src, rowvar=False, ddof=1))
    if np.trace(cov) == 0.0:
        return np.tile(mu, (m, 1))
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        eps = 1e-10 * np.trace(cov) / d
        try:
            chol = np.linalg.cholesky(cov + eps * np.eye(d))
        except np.linalg.LinAlgError as exc:
            raise NumericError("sample covariance is not factorizable") from exc
    z = rng.standard_normal((m, d))
    return mu + z @ chol.T


def perturbed_generate(
    source, m: int, noise_scale: float, rng: np.random.Generator
) -> np.ndarray:
    """Bootstrap a source row and add per-feature Gaussian noise.

    Noise standard deviation is ``noise_scale`` times the per-feature sample
    standard deviation (taken as 1 when only one source row exists).
    """
    if noise_scale < 0:
        raise ConfigError(f"noise scale {noise_scale} must be nonnegative")
    src = _check_source(source, 1)
    n, d = src.shape
    scale = src.std(axis=0, ddof=1) if n >= 2 else np.ones(d)
    idx = rng.integers(0, n, size=m)
    noise = rng.standard_normal((m, d)) * (noise_scale * scale)
    return src[idx] + noise


def bootstrap_generate(source, m: int, rng: np.random.Generator) -> np.ndarray:
    """Resample source rows uniformly with replacement."""
    src = _check_source(source, 1)
    idx = rng.integers(0, src.shape[0], size=m)
    return src[idx].copy()


def reweight_counts(n1: int, n0: int) -> tuple[int, int]:
    """Class weights (floor(n0/n1), 1); reweighting equals replication-based oversampling."""
    if n1 < 1:
        raise DataError("minority count must be at least 1")
    return n0 // n1, 1


@dataclass(frozen=True)
class SmoteGenerator:
    k: int = 5
    name: str = "smote"

    def generate(self, source, m, rng):
        return smote_generate(source, m, self.k, rng)


@dataclass(frozen=True)
class BiasedSmoteGenerator:
    k: int = 5
    name: str = "biased-smote"

    def generate(self, source, m, rng):
        return biased_smote_generate(source, m, self.k, rng)


@dataclass(frozen=True)
class GaussianGenerator:
    name: str = "gaussian"

    def generate(self, source, m, rng):
        return gaussian_generate(source, m, rng)


@dataclass(frozen=True)
class PerturbedGenerator:
    noise_scale: float = 0.5
    name: str = "perturbed"

    def generate(self, source, m, rng):
        return perturbed_generate(source, m, self.noise_scale, rng)


@dataclass(frozen=True)
class BootstrapGenerator:
    name: str = "bootstrap"

    def generate(self, source, m, rng):
        return bootstrap_generate(source, m, rng)


GENERATOR_NAMES = ("smote", "gaussian", "perturbed", "bootstrap", "biased-smote")


def make_generator(name: str, k: int = 5, noise_scale: float = 0.5):
    """Build a generator from its CLI/config name."""
    if name == "smote":
        return SmoteGenerator(k=k)
    if name == "biased-smote":
        return BiasedSmoteGenerator(k=k)
    if name == "gaussian":
        return GaussianGenerator()
    if name == "perturbed":
        return PerturbedGenerator(noise_scale=noise_scale)
    if name == "bootstrap":
        return BootstrapGenerator()
    raise ConfigError(f"unknown generator {name!r}; choose from {GENERATOR_NAMES}")
