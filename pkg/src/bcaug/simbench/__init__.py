"""Data-generating processes and the seeded Monte Carlo runner."""

from .dgp import (
    CausalDgp,
    CausalTrial,
    DegenerateDraw,
    MeanShiftDgp,
    NonLinear2dDgp,
    PlantedSubspaceDgp,
    SigmoidBernoulliDgp,
    generate,
)
from .dists import BadDistParam, Dist, parse_dist, sample_array, sample_scalar
from .runner import (
    DEFAULTS,
    METHODS,
    REPORT_COLUMNS,
    STUDIES,
    Aggregate,
    ReplicateError,
    RngStream,
    TrialReport,
    aggregate,
    merge_config,
    paired_sign_test,
    run_mtl_study,
    run_study,
    sign_test_pvalue,
    summary_markdown,
    sweep_markdown,
    sweep_means,
    write_reports_csv,
    write_sweep_csv,
)

__all__ = [
    "BadDistParam",
    "CausalDgp",
    "CausalTrial",
    "DegenerateDraw",
    "Dist",
    "MeanShiftDgp",
    "NonLinear2dDgp",
    "PlantedSubspaceDgp",
    "SigmoidBernoulliDgp",
    "generate",
    "parse_dist",
    "sample_array",
    "sample_scalar",
    "DEFAULTS",
    "METHODS",
    "REPORT_COLUMNS",
    "STUDIES",
    "Aggregate",
    "ReplicateError",
    "RngStream",
    "TrialReport",
    "aggregate",
    "merge_config",
    "paired_sign_test",
    "run_mtl_study",
    "run_study",
    "sign_test_pvalue",
    "summary_markdown",
    "sweep_markdown",
    "sweep_means",
    "write_reports_csv",
    "write_sweep_csv",
]
