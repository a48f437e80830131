"""Bias-corrected synthetic-data augmentation for imbalanced binary classification.

Train a logistic classifier on raw data, on synthetic-augmented data, or on
synthetic-augmented data with the majority-anchored bias correction, and
reproduce the library's Monte Carlo studies from the command line.
"""

from .dataset import (
    ClassSplit,
    Dataset,
    MajorityPartition,
    TrainValTest,
    load_csv,
    load_mnist_idx,
    partition_majority,
    split_by_class,
    split_train_val_test,
)
from .generators import make_generator, reweight_counts
from .loss import (
    AugmentedTrainSet,
    bce,
    delta0_hat,
    delta1_hat_oracle,
    gap_delta,
    loss_balanced_oracle,
    loss_bc,
    loss_raw,
    loss_syn,
)
from .metrics import (
    ConfusionMatrix,
    MetricReport,
    beta_mse,
    compute_metrics,
    confusion,
    sin_theta_distance,
)
from .model import FitResult, LogisticModel, TrainConfig, fit, grad_loss
from .pipeline import build_augmented, fit_method

__version__ = "0.1.0"

__all__ = [
    "AugmentedTrainSet",
    "ClassSplit",
    "ConfusionMatrix",
    "Dataset",
    "FitResult",
    "LogisticModel",
    "MajorityPartition",
    "MetricReport",
    "TrainConfig",
    "TrainValTest",
    "bce",
    "beta_mse",
    "build_augmented",
    "compute_metrics",
    "confusion",
    "delta0_hat",
    "delta1_hat_oracle",
    "fit",
    "fit_method",
    "gap_delta",
    "grad_loss",
    "load_csv",
    "load_mnist_idx",
    "loss_balanced_oracle",
    "loss_bc",
    "loss_raw",
    "loss_syn",
    "make_generator",
    "partition_majority",
    "reweight_counts",
    "sin_theta_distance",
    "split_by_class",
    "split_train_val_test",
]
