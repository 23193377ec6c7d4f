"""Simulation and model-comparison toolkit for first-order (regression) and
second-order (RSA) model selection."""

# version first: harness reads it back during the submodule imports below
__version__ = "0.1.0"

from .empirical import load_norms, run_empirical, subsample_compare, write_synthetic_norms
from .harness import ConfigError, ExperimentConfig, expand_grid, run_experiment
from .linmod import lmm_fit, ols_fit, pca_scores, ridge_cv
from .metrics import cohens_d, interval, selection_accuracy, summarize_pairs
from .methods import (
    score_fr_rsa,
    score_lmm,
    score_pca_rsa,
    score_regression,
    score_replication,
    score_rsa,
)
from .rdm import Rdm, average_ranks, correlation_rdm, euclidean_rdm, rsa_score, spearman
from .simgen import (
    CovarianceSpec,
    build_covariance,
    derive_stream,
    generate_replication,
    generate_voxel_replication,
)

__all__ = [
    "ConfigError",
    "CovarianceSpec",
    "ExperimentConfig",
    "Rdm",
    "average_ranks",
    "build_covariance",
    "cohens_d",
    "correlation_rdm",
    "derive_stream",
    "euclidean_rdm",
    "expand_grid",
    "generate_replication",
    "generate_voxel_replication",
    "interval",
    "lmm_fit",
    "load_norms",
    "ols_fit",
    "pca_scores",
    "ridge_cv",
    "rsa_score",
    "run_empirical",
    "run_experiment",
    "score_fr_rsa",
    "score_lmm",
    "score_pca_rsa",
    "score_regression",
    "score_replication",
    "score_rsa",
    "selection_accuracy",
    "spearman",
    "subsample_compare",
    "summarize_pairs",
    "write_synthetic_norms",
]
