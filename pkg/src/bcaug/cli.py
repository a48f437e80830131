"""Command-line surface: train, evaluate, simulate, mnist, mtl, ate.

Seeds are mandatory for every stochastic subcommand; nothing falls back to
wall-clock time.  Exit codes: 2 for configuration errors, 3 for data
errors, 4 for numeric failures.
"""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np
import tomli

from . import simbench
from .dataset import (
    Dataset,
    load_csv,
    load_mnist_idx,
    split_train_val_test,
    subsample_minority,
    swap_labels,
)
from .errors import ConfigError, DataError, Error, NumericError
from .generators import GENERATOR_NAMES, make_generator
from .metrics import compute_metrics, confusion
from .model import LogisticModel, TrainConfig
from .pipeline import fit_method

STUDY_NAMES = {
    "mean-shift": "mean_shift",
    "nonlinear": "nonlinear",
    "sigmoid-bernoulli": "sigmoid_bernoulli",
    "ate": "ate",
    "prop2-scaling": "prop2_scaling",
    "gap-shrinkage": "gap_shrinkage",
}

_SWEEPS = {
    "prop2_scaling": ("smote_k", "abs_delta1", "mean_abs_delta1"),
    "gap_shrinkage": ("gap_n", "gap_abs", "mean_gap"),
}

METRIC_PANEL = ("recall", "precision", "accuracy", "fowlkes_mallows", "f1", "mcc", "jaccard")


def _parse_value(text: str):
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    if "," in text:
        return [_parse_value(tok) for tok in text.split(",")]
    return text


def _load_overrides(config_path, sets) -> dict:
    overrides: dict = {}
    if config_path:
        try:
            with open(config_path, "rb") as fh:
                overrides = tomli.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file {config_path} not found") from None
        except tomli.TOMLDecodeError as exc:
            raise ConfigError(f"config file {config_path}: {exc}") from None
    for item in sets or []:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"--set expects table.key=value, got {item!r}")
        key, value = item.split("=", 1)
        table, name = key.split(".", 1)
        overrides.setdefault(table, {})[name] = _parse_value(value)
    return overrides


def _out_dir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _train_cfg(args) -> TrainConfig:
    return TrainConfig(epochs=args.epochs, learning_rate=args.lr, init=args.init)


def _generator_from_args(args, method: str):
    if method == "raw":
        return None
    if not args.generator:
        raise ConfigError(f"--method {method} requires --generator")
    return make_generator(args.generator, k=args.k, noise_scale=args.noise_scale)


def _write_metric_rows(path, rows: list[dict]) -> None:
    cols = list(rows[0].keys())
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(cols)
        for row in rows:
            writer.writerow([str(row[c]) for c in cols])


def _evaluate_split(model, data: Dataset, threshold: float, f_beta: float) -> dict:
    pred = model.classify(data.x, threshold)
    report = compute_metrics(confusion(data.y, pred), beta=f_beta)
    return {c: getattr(report, c) for c in report.COLUMNS}


def cmd_train(args) -> int:
    data = load_csv(args.data, args.label_col)
    if args.swap_labels:
        data = swap_labels(data)
    generator = _generator_from_args(args, args.method)
    rng = np.random.default_rng(np.random.SeedSequence(args.seed, spawn_key=(0,)))
    tvt = split_train_val_test(data, tuple(args.split), rng)
    gen_rng = np.random.default_rng(np.random.SeedSequence(args.seed, spawn_key=(1,)))
    result = fit_method(
        args.method,
        tvt.train,
        _train_cfg(args),
        generator=generator,
        rng=gen_rng,
        intercept=args.intercept,
    )
    out = _out_dir(args.out)
    (out / "model.json").write_text(result.model.to_json(), encoding="utf-8")
    rows = []
    for name, part in (("val", tvt.val), ("test", tvt.test)):
        if part.n == 0:
            continue
        row = {"split": name, "method": args.method}
        row.update(_evaluate_split(result.model, part, args.threshold, args.fbeta))
        rows.append(row)
    _write_metric_rows(out / "metrics.csv", rows)
    for row in rows:
        print(
            f"{row['split']}: recall={row['recall']:.4f} precision={row['precision']:.4f} "
            f"f1={row['f1']:.4f} accuracy={row['accuracy']:.4f}"
        )
    print(f"wrote {out / 'model.json'} and {out / 'metrics.csv'}")
    return 0


def cmd_evaluate(args) -> int:
    model = LogisticModel.from_json(Path(args.model).read_text(encoding="utf-8"))
    data = load_csv(args.data, args.label_col)
    if args.swap_labels:
        data = swap_labels(data)
    row = {"split": "all", "method": "saved"}
    row.update(_evaluate_split(model, data, args.threshold, args.fbeta))
    out = _out_dir(args.out)
    _write_metric_rows(out / "metrics.csv", [row])
    print(
        f"recall={row['recall']:.4f} precision={row['precision']:.4f} "
        f"f1={row['f1']:.4f} accuracy={row['accuracy']:.4f}"
    )
    return 0


def _write_study_outputs(study: str, reports, out: Path) -> None:
    simbench.write_reports_csv(reports, out / "reports.csv")
    if study in _SWEEPS:
        key, value, out_name = _SWEEPS[study]
        rows = simbench.sweep_means(reports, key, value)
        simbench.write_sweep_csv(reports, out / "summary.csv", key, value, out_name)
        text = simbench.sweep_markdown(study, rows, key, value)
    else:
        agg = simbench.aggregate(reports)
        text = simbench.summary_markdown(study, agg)
    (out / "summary.md").write_text(text, encoding="utf-8")
    print(text)


def cmd_simulate(args) -> int:
    study = STUDY_NAMES[args.study]
    overrides = _load_overrides(args.config, args.set)
    if args.replicates is not None:
        overrides.setdefault("study", {})["replicates"] = args.replicates
    reports = simbench.run_study(study, overrides, master_seed=args.seed, jobs=args.jobs)
    out = _out_dir(args.out)
    _write_study_outputs(study, reports, out)
    return 0


def cmd_mnist(args) -> int:
    try:
        digits = {int(tok) for tok in str(args.digits).split(",")}
    except ValueError:
        raise ConfigError(f"--digits expects comma-separated integers, got {args.digits!r}") from None
    if args.positive_digit not in digits:
        raise ConfigError(
            f"--positive-digit {args.positive_digit} must be one of --digits {sorted(digits)}"
        )
    if not 0 < args.ratio < 1:
        raise ConfigError(f"--ratio {args.ratio} must be in (0, 1)")
    data = load_mnist_idx(args.images, args.labels, digits, args.positive_digit)
    sub_rng = np.random.default_rng(np.random.SeedSequence(args.seed, spawn_key=(0,)))
    data = subsample_minority(data, args.ratio, sub_rng)
    split_rng = np.random.default_rng(np.random.SeedSequence(args.seed, spawn_key=(1,)))
    tvt = split_train_val_test(data, (0.6, 0.2, 0.2), split_rng)
    generator = _generator_from_args(args, args.method)
    gen_rng = np.random.default_rng(np.random.SeedSequence(args.seed, spawn_key=(2,)))
    result = fit_method(
        args.method,
        tvt.train,
        _train_cfg(args),
        generator=generator,
        rng=gen_rng,
        intercept=True,
    )
    row = {
        "method": args.method,
        "generator": args.generator or "",
        "positive_digit": args.positive_digit,
        "ratio": args.ratio,
    }
    full = _evaluate_split(result.model, tvt.test, args.threshold, args.fbeta)
    row.update({name: full[name] for name in METRIC_PANEL})
    out = _out_dir(args.out)
    _write_metric_rows(out / "mnist_metrics.csv", [row])
    print(" ".join(f"{name}={row[name]:.4f}" for name in METRIC_PANEL))
    return 0


def cmd_mtl(args) -> int:
    overrides = _load_overrides(args.config, args.set)
    reports = simbench.run_mtl_study(overrides, master_seed=args.seed, jobs=args.jobs)
    out = _out_dir(args.out)
    _write_study_outputs("mtl", reports, out)
    return 0


def cmd_ate(args) -> int:
    overrides = _load_overrides(args.config, args.set)
    reports = simbench.run_study("ate", overrides, master_seed=args.seed, jobs=args.jobs)
    out = _out_dir(args.out)
    _write_study_outputs("ate", reports, out)
    return 0


def _add_train_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--method", choices=("raw", "syn", "bc"), required=True)
    p.add_argument("--generator", choices=GENERATOR_NAMES)
    p.add_argument("--k", type=int, default=5, help="SMOTE neighbor count")
    p.add_argument("--noise-scale", type=float, default=0.5)
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--init", choices=("zeros", "gaussian"), default="zeros")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--fbeta", type=float, default=1.0)


def _add_common(p: argparse.ArgumentParser, seed_required: bool = True) -> None:
    p.add_argument("--seed", type=int, required=seed_required, help="master seed")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bcaug",
        description="Bias-corrected synthetic augmentation for imbalanced classification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit a model on a CSV dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--label-col", default="y")
    p.add_argument("--swap-labels", action="store_true")
    p.add_argument("--intercept", action="store_true")
    p.add_argument("--split", type=float, nargs=3, default=(0.6, 0.2, 0.2))
    _add_train_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="evaluate a saved model on a CSV dataset")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--label-col", default="y")
    p.add_argument("--swap-labels", action="store_true")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--fbeta", type=float, default=1.0)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("simulate", help="run a Monte Carlo study")
    p.add_argument("study", choices=sorted(STUDY_NAMES))
    p.add_argument("--config", help="TOML config file")
    p.add_argument("--set", action="append", metavar="TABLE.KEY=VALUE")
    p.add_argument("--replicates", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("mnist", help="imbalanced digit classification from IDX files")
    p.add_argument("--images", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--digits", default="0,1,2,3,4")
    p.add_argument("--positive-digit", type=int, required=True)
    p.add_argument("--ratio", type=float, default=0.05)
    _add_train_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_mnist)

    p = sub.add_parser("mtl", help="multi-task shared-subspace study")
    p.add_argument("--config")
    p.add_argument("--set", action="append", metavar="TABLE.KEY=VALUE")
    _add_common(p)
    p.set_defaults(func=cmd_mtl)

    p = sub.add_parser("ate", help="average-treatment-effect study")
    p.add_argument("--config")
    p.add_argument("--set", action="append", metavar="TABLE.KEY=VALUE")
    _add_common(p)
    p.set_defaults(func=cmd_ate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 4
    except Error as exc:
        cause = getattr(exc, "cause", None)
        if isinstance(cause, ConfigError):
            print(f"config error: {exc}", file=sys.stderr)
            return 2
        if isinstance(cause, NumericError):
            print(f"numeric error: {exc}", file=sys.stderr)
            return 4
        print(f"data error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
