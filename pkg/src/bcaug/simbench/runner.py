"""Seeded Monte Carlo runner reproducing the simulation studies.

Every replicate owns derived RNG sub-streams keyed by (master seed,
replicate, stage), so results are reproducible and independent of worker
scheduling.  Report rows exclude wall time so repeated runs stay
byte-identical.
"""
from __future__ import annotations

import csv
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import expit
from scipy.stats import binom

from .. import ate as ate_mod
from ..dataset import Dataset, split_by_class, split_train_val_test
from ..errors import ConfigError, Error
from ..generators import make_generator, smote_generate
from ..loss import delta1_hat_oracle, gap_delta
from ..metrics import (
    MetricReport,
    beta_mse,
    compute_metrics,
    confusion,
    sin_theta_distance,
)
from ..model import LogisticModel, TrainConfig, fit
from ..mtl import estimate_subspace, fit_all_tasks, jacobi_eigh
from ..pipeline import build_augmented, fit_method
from .dgp import (
    CausalDgp,
    MeanShiftDgp,
    NonLinear2dDgp,
    PlantedSubspaceDgp,
    SigmoidBernoulliDgp,
    generate,
)

METHODS = ("raw", "syn", "bc")

_STAGES = {"data": 0, "split": 1, "generator": 2, "init": 3}


@dataclass(frozen=True)
class RngStream:
    """Per-replicate factory of independent, reproducible RNG sub-streams."""

    seed: int
    replicate: int

    def stream(self, stage: str, extra: int = 0) -> np.random.Generator:
        key = (self.replicate, _STAGES[stage], extra)
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=key))


@dataclass
class TrialReport:
    """One row of the per-replicate report table."""

    study: str
    replicate: int
    method: str = ""
    generator: str = ""
    metrics: Optional[MetricReport] = None
    beta_sq_err: Optional[float] = None
    tau_err: Optional[float] = None
    smote_k: Optional[int] = None
    gap_n: Optional[int] = None
    abs_delta1: Optional[float] = None
    gap_abs: Optional[float] = None
    sin_theta: Optional[float] = None
    r_hat: Optional[int] = None
    wall_time_s: float = field(default=0.0, compare=False)


REPORT_COLUMNS = (
    "study",
    "replicate",
    "method",
    "generator",
    "recall",
    "precision",
    "f_beta",
    "f1",
    "jaccard",
    "mcc",
    "fowlkes_mallows",
    "accuracy",
    "degenerate",
    "beta_mse",
    "tau_err",
    "smote_k",
    "gap_n",
    "abs_delta1",
    "gap_abs",
    "sin_theta",
    "r_hat",
)

# wall_time_s stays in memory only: writing it would break byte-identical reruns.


def report_row(r: TrialReport) -> list:
    m = r.metrics
    vals = {
        "study": r.study,
        "replicate": r.replicate,
        "method": r.method,
        "generator": r.generator,
        "recall": m.recall if m else None,
        "precision": m.precision if m else None,
        "f_beta": m.f_beta if m else None,
        "f1": m.f1 if m else None,
        "jaccard": m.jaccard if m else None,
        "mcc": m.mcc if m else None,
        "fowlkes_mallows": m.fowlkes_mallows if m else None,
        "accuracy": m.accuracy if m else None,
        "degenerate": m.degenerate if m else None,
        "beta_mse": r.beta_sq_err,
        "tau_err": r.tau_err,
        "smote_k": r.smote_k,
        "gap_n": r.gap_n,
        "abs_delta1": r.abs_delta1,
        "gap_abs": r.gap_abs,
        "sin_theta": r.sin_theta,
        "r_hat": r.r_hat,
    }
    return ["" if vals[c] is None else str(vals[c]) for c in REPORT_COLUMNS]


DEFAULTS: dict = {
    "mean_shift": {
        "study": {"replicates": 100, "threshold": 0.5, "f_beta": 1.0, "syn0_factor": 1.0},
        "dgp": {"dist": "normal(0,1)", "n": 10000, "d": 10, "pi1": 0.01, "shift": 1.0},
        "generator": {"name": "smote", "k": 5, "noise_scale": 0.5},
        "train": {"epochs": 100, "learning_rate": 0.1, "init": "zeros", "intercept": True},
    },
    "nonlinear": {
        "study": {"replicates": 100, "threshold": 0.5, "f_beta": 1.0},
        "dgp": {"scenario": 1, "n": 2000, "pi1": 0.1, "noise": 0.2},
        "generator": {"name": "smote", "k": 5, "noise_scale": 0.5},
        "train": {"epochs": 100, "learning_rate": 0.1, "init": "zeros", "intercept": True},
    },
    "sigmoid_bernoulli": {
        "study": {"replicates": 100, "syn0_factor": 4.0},
        "dgp": {"dist": "normal(1,1)", "n": 1000, "d": 10, "beta_pattern": [0.5, -1.1]},
        "generator": {"name": "perturbed", "k": 5, "noise_scale": 2.0},
        "train": {"epochs": 100, "learning_rate": 0.05, "init": "zeros", "intercept": False},
    },
    "ate": {
        "study": {"replicates": 100, "clip_eta": 0.01, "syn0_factor": 1.0},
        "dgp": {
            "dist": "t(6)",
            "n": 2000,
            "d": 5,
            "treated_frac": 0.1,
            "tau": 1.0,
            "gamma_value": 0.5,
            "beta1_value": 1.0,
            "beta0_value": 1.0,
            "noise_sd": 1.0,
        },
        "generator": {"name": "smote", "k": 5, "noise_scale": 0.5},
        "train": {"epochs": 100, "learning_rate": 0.1, "init": "zeros", "intercept": True},
    },
    "prop2_scaling": {
        "study": {
            "replicates": 50,
            "ks": [2, 10, 50],
            "n_minority": 200,
            "n_synthetic": 2000,
            "n_star": 2000,
            "d": 2,
            "offset": 2.0,
        },
        "generator": {"name": "smote"},
    },
    "gap_shrinkage": {
        "study": {"replicates": 50, "scales": [1, 4], "n1": 100, "gap_base": 400},
        "dgp": {"dist": "normal(0,1)", "d": 10, "shift": 1.0},
        "generator": {"name": "smote", "k": 5, "noise_scale": 0.5},
    },
    "mtl": {
        "study": {"replicates": 50, "syn0_factor": 1.0},
        "dgp": {
            "d": 6,
            "k_tasks": 6,
            "r": 2,
            "n_per_task": 5000,
            "coef_norm": 1.6,
            "mean_scale": 2.0,
            "angle_spread": 1.0,
            "mean_skew": 1.0,
        },
        "generator": {"name": "biased-smote", "k": 50, "noise_scale": 0.5},
        "train": {"epochs": 100, "learning_rate": 0.2, "init": "zeros", "intercept": False},
    },
}

STUDIES = tuple(k for k in DEFAULTS if k != "mtl")


def merge_config(study: str, overrides: dict | None = None) -> dict:
    if study not in DEFAULTS:
        raise ConfigError(f"unknown study {study!r}; choose from {sorted(DEFAULTS)}")
    cfg = {table: dict(vals) for table, vals in DEFAULTS[study].items()}
    for table, vals in (overrides or {}).items():
        if table == "output":
            cfg.setdefault("output", {}).update(vals)
            continue
        if table not in cfg:
            raise ConfigError(f"unknown config table [{table}] for study {study!r}")
        for key, value in vals.items():
            if key not in cfg[table]:
                raise ConfigError(f"unknown config key {table}.{key} for study {study!r}")
            cfg[table][key] = value
    return cfg


def _train_config(cfg: dict) -> tuple[TrainConfig, bool]:
    t = cfg.get("train", {})
    tc = TrainConfig(
        epochs=int(t.get("epochs", 100)),
        learning_rate=float(t.get("learning_rate", 0.1)),
        init=t.get("init", "zeros"),
    )
    return tc, bool(t.get("intercept", False))


def _generator(cfg: dict):
    g = cfg["generator"]
    return make_generator(
        g["name"], k=int(g.get("k", 5)), noise_scale=float(g.get("noise_scale", 0.5))
    )


class ReplicateError(Error):
    def __init__(self, replicate: int, cause: Exception):
        super().__init__(f"replicate {replicate}: {cause}")
        self.replicate = replicate
        self.cause = cause


def _classification_rows(
    study: str, cfg: dict, dgp, streams: RngStream
) -> list[TrialReport]:
    full = generate(dgp, streams.stream("data"))
    tvt = split_train_val_test(full, rng=streams.stream("split"))
    gen = _generator(cfg)
    tcfg, intercept = _train_config(cfg)
    threshold = float(cfg["study"]["threshold"])
    fb = float(cfg["study"]["f_beta"])
    factor = float(cfg["study"].get("syn0_factor", 1.0))
    split = split_by_class(tvt.train)
    n_syn1 = max(split.n0 - split.n1, 0)
    aug = build_augmented(
        tvt.train,
        gen,
        streams.stream("generator"),
        n_syn_minority=n_syn1,
        n_syn_majority=max(int(round(factor * n_syn1)), 1),
    )
    rows = []
    for method in METHODS:
        start = time.perf_counter()
        data = tvt.train if method == "raw" else aug
        result = fit(method, data, tcfg, intercept=intercept)
        pred = result.model.classify(tvt.test.x, threshold)
        report = compute_metrics(confusion(tvt.test.y, pred), beta=fb)
        rows.append(
            TrialReport(
                study=study,
                replicate=streams.replicate,
                method=method,
                generator=gen.name,
                metrics=report,
                wall_time_s=time.perf_counter() - start,
            )
        )
    return rows


def _replicate_mean_shift(cfg: dict, streams: RngStream) -> list[TrialReport]:
    g = cfg["dgp"]
    dgp = MeanShiftDgp(
        base_dist=g["dist"],
        shift=float(g["shift"]),
        pi1=float(g["pi1"]),
        n=int(g["n"]),
        d=int(g["d"]),
    )
    return _classification_rows("mean_shift", cfg, dgp, streams)


def _replicate_nonlinear(cfg: dict, streams: RngStream) -> list[TrialReport]:
    g = cfg["dgp"]
    dgp = NonLinear2dDgp(
        scenario=int(g["scenario"]),
        pi1=float(g["pi1"]),
        n=int(g["n"]),
        noise=float(g["noise"]),
    )
    return _classification_rows("nonlinear", cfg, dgp, streams)


def _replicate_sigmoid(cfg: dict, streams: RngStream) -> list[TrialReport]:
    g = cfg["dgp"]
    d = int(g["d"])
    pattern = [float(v) for v in g["beta_pattern"]]
    beta_true = np.resize(np.asarray(pattern), d)
    dgp = SigmoidBernoulliDgp(
        cov_dist=g["dist"],
        beta_true=beta_true,
        n=int(g["n"]),
        d=d,
    )
    data = generate(dgp, streams.stream("data"))
    gen = _generator(cfg)
    tcfg, intercept = _train_config(cfg)
    factor = float(cfg["study"].get("syn0_factor", 1.0))
    split = split_by_class(data)
    n_syn1 = max(split.n0 - split.n1, 0)
    aug = build_augmented(
        data,
        gen,
        streams.stream("generator"),
        n_syn_minority=n_syn1,
        n_syn_majority=max(int(round(factor * n_syn1)), 1),
    )
    rows = []
    for method in METHODS:
        start = time.perf_counter()
        result = fit(method, data if method == "raw" else aug, tcfg, intercept=intercept)
        slopes = result.model.beta[: dgp.d]
        rows.append(
            TrialReport(
                study="sigmoid_bernoulli",
                replicate=streams.replicate,
                method=method,
                generator=gen.name,
                beta_sq_err=beta_mse(slopes, dgp.beta_true),
                wall_time_s=time.perf_counter() - start,
            )
        )
    return rows


def _replicate_ate(cfg: dict, streams: RngStream) -> list[TrialReport]:
    g = cfg["dgp"]
    d = int(g["d"])
    dgp = CausalDgp(
        cov_dist=g["dist"],
        gamma=np.full(d, float(g["gamma_value"])),
        beta1=np.full(d, float(g["beta1_value"])),
        beta0=np.full(d, float(g["beta0_value"])),
        tau_true=float(g["tau"]),
        treated_frac=float(g["treated_frac"]),
        noise_sd=float(g["noise_sd"]),
        n=int(g["n"]),
        d=d,
    )
    trial = generate(dgp, streams.stream("data"))
    cd = trial.data
    beta1, beta0 = ate_mod.fit_outcome_models(cd)
    mu1 = lambda x: ate_mod.linear_predict(x, beta1)  # noqa: E731
    mu0 = lambda x: ate_mod.linear_predict(x, beta0)  # noqa: E731
    gen = _generator(cfg)
    tcfg, intercept = _train_config(cfg)
    clip = float(cfg["study"]["clip_eta"])
    prop_data = Dataset(cd.x, cd.z)
    factor = float(cfg["study"].get("syn0_factor", 1.0))
    split = split_by_class(prop_data)
    n_syn1 = max(split.n0 - split.n1, 0)
    aug = build_augmented(
        prop_data,
        gen,
        streams.stream("generator"),
        n_syn_minority=n_syn1,
        n_syn_majority=max(int(round(factor * n_syn1)), 1),
    )
    rows = []
    for method in METHODS:
        start = time.perf_counter()
        model = fit_method(method, prop_data, tcfg, aug=aug, intercept=intercept).model
        res = ate_mod.aipw(
            cd, mu1, mu0, model.predict_proba, clip_eta=clip, propensity_variant=method
        )
        rows.append(
            TrialReport(
                study="ate",
                replicate=streams.replicate,
                method=method,
                generator=gen.name,
                tau_err=res.tau_hat - dgp.tau_true,
                wall_time_s=time.perf_counter() - start,
            )
        )
    return rows


class _QuadraticModel:
    """Fixed evaluation model p = sigmoid(|x|^2 - offset); loss varies over the support."""

    def __init__(self, offset: float):
        self.offset = offset

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        return expit(np.sum(np.asarray(x) ** 2, axis=1) - self.offset)


def _replicate_prop2(cfg: dict, streams: RngStream) -> list[TrialReport]:
    s = cfg["study"]
    d = int(s["d"])
    n1 = int(s["n_minority"])
    model = _QuadraticModel(float(s["offset"]))
    data_rng = streams.stream("data")
    source = data_rng.standard_normal((n1, d))
    star = data_rng.standard_normal((int(s["n_star"]), d))
    rows = []
    for i, k in enumerate(s["ks"]):
        start = time.perf_counter()
        gen_rng = streams.stream("generator", i)
        syn = smote_generate(source, int(s["n_synthetic"]), int(k), gen_rng)
        d1 = delta1_hat_oracle(model, star, syn)
        rows.append(
            TrialReport(
                study="prop2_scaling",
                replicate=streams.replicate,
                generator="smote",
                smote_k=int(k),
                abs_delta1=abs(d1),
                wall_time_s=time.perf_counter() - start,
            )
        )
    return rows


def _replicate_gap(cfg: dict, streams: RngStream) -> list[TrialReport]:
    s = cfg["study"]
    g = cfg["dgp"]
    d = int(g["d"])
    shift = float(g["shift"])
    n1 = int(s["n1"])
    gen = _generator(cfg)
    model = LogisticModel(np.full(d, 0.5), intercept=False)
    data_rng = streams.stream("data")
    rows = []
    for i, scale in enumerate(s["scales"]):
        start = time.perf_counter()
        gap_n = int(s["gap_base"]) * int(scale)
        n0 = n1 + gap_n
        x_min = data_rng.normal(0.0, 1.0, size=(n1, d)) + shift
        x_maj = data_rng.normal(0.0, 1.0, size=(n0, d))
        x = np.vstack([x_min, x_maj])
        y = np.concatenate([np.ones(n1, dtype=np.int64), np.zeros(n0, dtype=np.int64)])
        train = Dataset(x, y)
        gen_rng = streams.stream("generator", i)
        aug = build_augmented(train, gen, gen_rng)
        star = data_rng.normal(0.0, 1.0, size=(aug.n_syn_minority, d)) + shift
        rows.append(
            TrialReport(
                study="gap_shrinkage",
                replicate=streams.replicate,
                generator=gen.name,
                gap_n=gap_n,
                gap_abs=gap_delta(model, aug, star),
                wall_time_s=time.perf_counter() - start,
            )
        )
    return rows


def _replicate_mtl(cfg: dict, streams: RngStream) -> list[TrialReport]:
    g = cfg["dgp"]
    dgp = PlantedSubspaceDgp(
        d=int(g["d"]),
        k_tasks=int(g["k_tasks"]),
        r=int(g["r"]),
        n_per_task=int(g["n_per_task"]),
        coef_norm=float(g["coef_norm"]),
        mean_scale=float(g["mean_scale"]),
        angle_spread=float(g["angle_spread"]),
        mean_skew=float(g.get("mean_skew", 0.0)),
    )
    tasks, m_true, u_true = dgp.draw(streams.stream("data"))
    gen = _generator(cfg)
    tcfg, _ = _train_config(cfg)
    seed_rng = streams.stream("generator")
    task_seeds = [int(v) for v in seed_rng.integers(0, 2**63 - 1, size=dgp.k_tasks)]
    factor = float(cfg["study"].get("syn0_factor", 1.0))
    rows = []
    for method in METHODS:
        start = time.perf_counter()
        m_hat = fit_all_tasks(tasks, method, gen, tcfg, task_seeds, syn0_factor=factor)
        sub = estimate_subspace(m_hat)
        _, vecs = jacobi_eigh(m_hat @ m_hat.T)
        sin_t = sin_theta_distance(vecs[:, : dgp.r], u_true)
        err = float(np.mean(np.sum((m_hat - m_true) ** 2, axis=0)))
        rows.append(
            TrialReport(
                study="mtl",
                replicate=streams.replicate,
                method=method,
                generator=gen.name,
                sin_theta=sin_t,
                r_hat=sub.r_hat,
                beta_sq_err=err,
                wall_time_s=time.perf_counter() - start,
            )
        )
    return rows


_REPLICATES = {
    "mean_shift": _replicate_mean_shift,
    "nonlinear": _replicate_nonlinear,
    "sigmoid_bernoulli": _replicate_sigmoid,
    "ate": _replicate_ate,
    "prop2_scaling": _replicate_prop2,
    "gap_shrinkage": _replicate_gap,
    "mtl": _replicate_mtl,
}


def _run_replicate(args) -> list[TrialReport]:
    study, cfg, seed, replicate = args
    try:
        return _REPLICATES[study](cfg, RngStream(seed, replicate))
    except Error as exc:
        raise ReplicateError(replicate, exc) from exc


def run_study(
    study: str,
    overrides: dict | None = None,
    master_seed: int = 0,
    jobs: int = 1,
) -> list[TrialReport]:
    """Run all replicates of a study; deterministic given (config, seed)."""
    cfg = merge_config(study, overrides)
    reps = int(cfg["study"]["replicates"])
    tasks = [(study, cfg, master_seed, i) for i in range(reps)]
    if jobs <= 1:
        chunks = [_run_replicate(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_replicate, tasks))
    return [row for chunk in chunks for row in chunk]


def run_mtl_study(
    overrides: dict | None = None, master_seed: int = 0, jobs: int = 1
) -> list[TrialReport]:
    return run_study("mtl", overrides, master_seed, jobs)


# aggregation ---------------------------------------------------------------

_HIGHER_BETTER = {
    "recall",
    "precision",
    "f_beta",
    "f1",
    "jaccard",
    "mcc",
    "fowlkes_mallows",
    "accuracy",
}
_LOWER_BETTER = {"beta_mse", "tau_abs_err", "sin_theta"}


def _metric_values(reports: list[TrialReport]) -> dict[str, dict[str, dict[int, float]]]:
    """metric -> method -> replicate -> value (tau errors folded to |err|)."""
    out: dict[str, dict[str, dict[int, float]]] = {}

    def put(metric, method, rep, value):
        out.setdefault(metric, {}).setdefault(method, {})[rep] = float(value)

    for r in reports:
        if r.metrics is not None:
            for name in (
                "recall",
                "precision",
                "f_beta",
                "f1",
                "jaccard",
                "mcc",
                "fowlkes_mallows",
                "accuracy",
            ):
                put(name, r.method, r.replicate, getattr(r.metrics, name))
        if r.beta_sq_err is not None:
            put("beta_mse", r.method, r.replicate, r.beta_sq_err)
        if r.tau_err is not None:
            put("tau_abs_err", r.method, r.replicate, abs(r.tau_err))
        if r.sin_theta is not None:
            put("sin_theta", r.method, r.replicate, r.sin_theta)
    return out


@dataclass
class Aggregate:
    """Per-method means/sds for each metric plus paired bc-vs-syn win rates."""

    methods: list[str]
    means: dict[str, dict[str, float]]
    sds: dict[str, dict[str, float]]
    n_replicates: int
    win_rates: dict[str, float]

    def mean(self, metric: str, method: str) -> float:
        return self.means[metric][method]


def aggregate(reports: list[TrialReport]) -> Aggregate:
    if not reports:
        raise ConfigError("nothing to aggregate")
    values = _metric_values(reports)
    methods = sorted(
        {r.method for r in reports if r.method}, key=lambda m: METHODS.index(m) if m in METHODS else 99
    )
    means: dict[str, dict[str, float]] = {}
    sds: dict[str, dict[str, float]] = {}
    win_rates: dict[str, float] = {}
    n_reps = len({r.replicate for r in reports})
    for metric, per_method in values.items():
        means[metric] = {}
        sds[metric] = {}
        for method, by_rep in per_method.items():
            vals = np.asarray(list(by_rep.values()))
            means[metric][method] = float(vals.mean())
            sds[metric][method] = float(vals.std(ddof=1)) if vals.size > 1 else 0.0
        if "bc" in per_method and "syn" in per_method:
            shared = sorted(set(per_method["bc"]) & set(per_method["syn"]))
            if shared:
                bc = np.asarray([per_method["bc"][i] for i in shared])
                sy = np.asarray([per_method["syn"][i] for i in shared])
                wins = (bc > sy) if metric in _HIGHER_BETTER else (bc < sy)
                win_rates[metric] = float(np.sum(wins)) / len(shared)
    return Aggregate(methods, means, sds, n_reps, win_rates)


def sign_test_pvalue(wins: int, losses: int) -> float:
    """One-sided paired sign test that wins exceed losses; ties are dropped.

    Exact binomial tail below 100 informative pairs, normal approximation
    with continuity correction from 100 up.
    """
    n = wins + losses
    if n == 0:
        return 1.0
    if n < 100:
        return float(binom.sf(wins - 1, n, 0.5))
    z = (wins - n / 2.0 - 0.5) / np.sqrt(n / 4.0)
    from math import erf, sqrt

    return 0.5 * (1.0 - erf(z / sqrt(2.0)))


def paired_sign_test(
    reports: list[TrialReport], metric: str, better: str, worse: str
) -> tuple[int, int, float]:
    """(wins, losses, p-value) that ``better`` beats ``worse`` on the metric."""
    values = _metric_values(reports)[metric]
    shared = sorted(set(values[better]) & set(values[worse]))
    a = np.asarray([values[better][i] for i in shared])
    b = np.asarray([values[worse][i] for i in shared])
    if metric in _HIGHER_BETTER:
        wins, losses = int(np.sum(a > b)), int(np.sum(a < b))
    else:
        wins, losses = int(np.sum(a < b)), int(np.sum(a > b))
    return wins, losses, sign_test_pvalue(wins, losses)


def sweep_means(reports: list[TrialReport], key: str, value: str) -> list[tuple[int, float]]:
    """Mean of ``value`` grouped by the integer sweep column ``key``, ascending."""
    groups: dict[int, list[float]] = {}
    for r in reports:
        k = getattr(r, key)
        v = getattr(r, value)
        if k is not None and v is not None:
            groups.setdefault(int(k), []).append(float(v))
    return [(k, float(np.mean(groups[k]))) for k in sorted(groups)]


# persistence ---------------------------------------------------------------


def write_reports_csv(reports: list[TrialReport], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(REPORT_COLUMNS)
        for r in reports:
            writer.writerow(report_row(r))


def write_sweep_csv(reports: list[TrialReport], path, key: str, value: str, out_name: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([key, out_name])
        for k, v in sweep_means(reports, key, value):
            writer.writerow([k, str(v)])


def summary_markdown(study: str, agg: Aggregate) -> str:
    lines = [f"# Summary: {study}", ""]
    metrics = sorted(agg.means)
    if agg.methods:
        header = "| metric | " + " | ".join(agg.methods) + " |"
        sep = "|---" * (len(agg.methods) + 1) + "|"
        lines += [header, sep]
        for metric in metrics:
            cells = []
            for m in agg.methods:
                if m in agg.means[metric]:
                    cells.append(f"{agg.means[metric][m]:.4f} ({agg.sds[metric][m]:.4f})")
                else:
                    cells.append("")
            lines.append(f"| {metric} | " + " | ".join(cells) + " |")
        lines.append("")
    if agg.win_rates:
        lines.append("Paired win rate of bc over syn:")
        for metric in sorted(agg.win_rates):
            lines.append(f"- {metric}: {agg.win_rates[metric]:.2f}")
        lines.append("")
    lines.append(f"replicates: {agg.n_replicates}")
    lines.append("")
    return "\n".join(lines)


def sweep_markdown(study: str, rows: list[tuple[int, float]], key: str, value: str) -> str:
    lines = [f"# Summary: {study}", "", f"| {key} | mean {value} |", "|---|---|"]
    for k, v in rows:
        lines.append(f"| {k} | {v:.6f} |")
    lines.append("")
    return "\n".join(lines)
