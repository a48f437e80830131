"""Multi-task imbalanced learning: per-task fits, shared-subspace recovery,
rank selection, and transfer to a new task.

Per-task coefficient estimates are stacked into a d x K matrix; the shared
left-singular subspace is read off a cyclic-Jacobi eigendecomposition of
M M', with the rank chosen by the largest eigenvalue ratio.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import ConfigError, DataError, NumericError
from .model import LogisticModel, TrainConfig, fit
from .pipeline import build_augmented, fit_method


class RankCapTooLarge(ConfigError):
    pass


class DegenerateSpectrum(NumericError):
    pass


class TaskFitError(DataError):
    def __init__(self, task: int, cause: Exception):
        super().__init__(f"task {task}: {cause}")
        self.task = task
        self.cause = cause


def jacobi_eigh(a: np.ndarray, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a small symmetric matrix by cyclic Jacobi rotations.

    Sweeps until every off-diagonal magnitude drops below 1e-12 times the
    Frobenius norm of the input.  Returns (eigenvalues descending,
    eigenvectors as columns) with each column's largest-magnitude entry made
    positive.
    """
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise DataError("matrix must be square")
    if np.max(np.abs(a - a.T)) > 1e-10 * max(1.0, np.abs(a).max()):
        raise DataError("matrix must be symmetric")
    a = a.copy()
    v = np.eye(n)
    thresh = 1e-12 * np.linalg.norm(a)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= thresh:
                    continue
                rotated = True
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                a[p, q] = a[q, p] = 0.0
                rot_p = c * v[:, p] - s * v[:, q]
                rot_q = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = rot_p, rot_q
        if not rotated:
            break
    else:
        raise NumericError("Jacobi eigensolver did not converge")
    eigvals = np.diag(a).copy()
    order = np.argsort(-eigvals, kind="stable")
    eigvals = eigvals[order]
    v = v[:, order]
    for j in range(n):
        lead = np.argmax(np.abs(v[:, j]))
        if v[lead, j] < 0:
            v[:, j] = -v[:, j]
    return eigvals, v


@dataclass(frozen=True)
class SharedSubspace:
    """Estimated shared embedding: leading eigenvectors, selected rank, spectrum."""

    u_hat: np.ndarray
    r_hat: int
    eigenvalues: np.ndarray

    def to_json(self) -> str:
        return json.dumps(
            {
                "U": self.u_hat.tolist(),
                "r_hat": self.r_hat,
                "eigenvalues": self.eigenvalues.tolist(),
            }
        )


def fit_all_tasks(
    tasks: list[Dataset],
    objective: str,
    generator,
    cfg: TrainConfig,
    seeds: list[int],
    syn0_factor: float = 1.0,
) -> np.ndarray:
    """Fit the chosen objective on every task; columns stack into a d x K matrix.

    ``seeds`` supplies one augmentation seed per task, so identical tasks
    given identical seeds produce identical columns.  ``syn0_factor`` scales
    the majority synthetic count relative to the minority one.
    """
    if not tasks:
        raise DataError("need at least one task")
    d = tasks[0].d
    if any(t.d != d for t in tasks):
        raise DataError("all tasks must share the covariate dimension")
    if len(seeds) != len(tasks):
        raise ConfigError(f"need {len(tasks)} seeds, got {len(seeds)}")
    cols = []
    for k, (task, seed) in enumerate(zip(tasks, seeds)):
        try:
            rng = np.random.default_rng(np.random.SeedSequence(seed))
            if objective == "raw":
                result = fit_method("raw", task, cfg)
            else:
                from .dataset import split_by_class

                split = split_by_class(task)
                n_syn1 = max(split.n0 - split.n1, 0)
                if n_syn1 == 0:
                    result = fit_method("raw", task, cfg)
                else:
                    aug = build_augmented(
                        task,
                        generator,
                        rng,
                        n_syn_minority=n_syn1,
                        n_syn_majority=max(int(round(syn0_factor * n_syn1)), 1),
                    )
                    result = fit_method(objective, task, cfg, aug=aug)
        except Exception as exc:
            raise TaskFitError(k, exc) from exc
        cols.append(result.model.beta)
    return np.column_stack(cols)


def estimate_subspace(m_hat: np.ndarray, d_minus: int | None = None) -> SharedSubspace:
    """Eigendecompose M M' and select the rank by the largest eigenvalue ratio.

    Ratio ties resolve toward the smaller rank.  A ratio with zero numerator
    and denominator is excluded; if no candidate ratio is well defined the
    spectrum is degenerate.
    """
    m = np.asarray(m_hat, dtype=np.float64)
    if m.ndim != 2:
        raise DataError("coefficient matrix must be 2-d")
    if not np.isfinite(m).all():
        raise DataError("coefficient matrix must be finite")
    d, k = m.shape
    if d_minus is None:
        d_minus = min(d, k) - 1
    if not 1 <= d_minus <= min(d - 1, k):
        raise RankCapTooLarge(
            f"rank cap {d_minus} must be in [1, {min(d - 1, k)}] for shape {m.shape}"
        )
    eigvals, eigvecs = jacobi_eigh(m @ m.T)
    lam = np.maximum(eigvals, 0.0)
    if lam[0] <= 1e-300:
        raise DegenerateSpectrum("leading eigenvalue vanishes")
    # eigenvalues this far below the leading one are numerically zero;
    # ratios against them say nothing about the spectral gap
    floor = 1e-12 * lam[0]
    num = lam[:d_minus]
    den = lam[1 : d_minus + 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(den > floor, num / den, -np.inf)
    if (ratios > -np.inf).any():
        r_hat = int(np.argmax(ratios)) + 1
    else:
        # every candidate ratio is dead: the spectrum itself shows the rank
        r_hat = max(int(np.sum(lam > floor)), 1)
        r_hat = min(r_hat, d_minus)
    return SharedSubspace(eigvecs[:, :r_hat].copy(), r_hat, eigvals)


@dataclass(frozen=True)
class TransferResult:
    beta: np.ndarray
    theta: np.ndarray
    model: LogisticModel


def transfer_fit(
    new_task: Dataset,
    subspace: SharedSubspace,
    objective: str,
    cfg: TrainConfig,
    generator=None,
    rng: np.random.Generator | None = None,
) -> TransferResult:
    """Fit in the projected space and map the coefficients back.

    Covariates are projected onto the estimated subspace, the chosen
    objective is minimized there (synthetics, when used, are generated in
    the projected space), and beta = U theta returns to the original space.
    """
    u = subspace.u_hat
    if u.shape[0] != new_task.d:
        raise DataError(
            f"subspace dimension {u.shape[0]} does not match task dimension {new_task.d}"
        )
    projected = Dataset(new_task.x @ u, new_task.y)
    if objective == "raw":
        result = fit("raw", projected, cfg)
    else:
        if generator is None or rng is None:
            raise ConfigError(f"objective {objective!r} requires a generator and rng")
        aug = build_augmented(projected, generator, rng)
        result = fit(objective, aug, cfg)
    theta = result.model.beta
    beta = u @ theta
    return TransferResult(beta, theta, LogisticModel(beta, intercept=False))
