"""Shared single-task training recipe: split, augment, fit.

Default sizes follow the balance rule: the minority synthetic count tops the
minority up to the majority count, the generation set matches the minority
count (capped at half the majority), and the majority synthetic count equals
the minority one.
"""
from __future__ import annotations

import numpy as np

from .dataset import (
    Dataset,
    default_generation_size,
    partition_majority,
    split_by_class,
)
from .errors import ConfigError
from .loss import AugmentedTrainSet
from .model import FitResult, TrainConfig, fit


def build_augmented(
    train: Dataset,
    generator,
    rng: np.random.Generator,
    n_syn_minority: int | None = None,
    n0g: int | None = None,
    n_syn_majority: int | None = None,
) -> AugmentedTrainSet:
    """Generate minority synthetics and the majority partition/synthetics.

    Consumes the rng in a fixed order (partition, minority, majority) so a
    single stream gives reproducible augmentation.
    """
    split = split_by_class(train)
    if n_syn_minority is None:
        n_syn_minority = max(split.n0 - split.n1, 0)
    if n0g is None:
        n0g = default_generation_size(split.n1, split.n0)
    if n_syn_majority is None:
        n_syn_majority = n_syn_minority
    part = partition_majority(split, n0g, rng)
    syn1 = generator.generate(train.x[split.minority_idx], n_syn_minority, rng)
    syn0 = generator.generate(train.x[part.generation_idx], n_syn_majority, rng)
    return AugmentedTrainSet(train, syn1, syn0, part)


def fit_method(
    method: str,
    train: Dataset,
    cfg: TrainConfig | None = None,
    generator=None,
    rng: np.random.Generator | None = None,
    intercept: bool = False,
    aug: AugmentedTrainSet | None = None,
    init_rng: np.random.Generator | None = None,
) -> FitResult:
    """Fit one of raw/syn/bc on a training set, building augmentation as needed.

    Passing a prebuilt ``aug`` lets callers reuse one augmentation across
    methods (paired comparisons).  A balanced training set (no minority
    deficit) degenerates syn and bc to the raw fit.
    """
    if method == "raw":
        return fit("raw", train, cfg, intercept=intercept, rng=init_rng)
    if method not in ("syn", "bc"):
        raise ConfigError(f"unknown method {method!r}; choose raw, syn, or bc")
    if aug is None:
        if generator is None:
            raise ConfigError(f"method {method!r} requires a generator")
        if rng is None:
            raise ConfigError(f"method {method!r} requires an rng")
        split = split_by_class(train)
        if split.n0 - split.n1 <= 0:
            return fit("raw", train, cfg, intercept=intercept, rng=init_rng)
        aug = build_augmented(train, generator, rng)
    return fit(method, aug, cfg, intercept=intercept, rng=init_rng)
