"""The five scoring pipelines: each maps one dataset to one scalar estimate.

score_replication orchestrates all requested methods on one replication and
shares rank computations that several pipelines have in common; every shared
path is numerically identical to the standalone score_* call.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linmod import _fit_from_stats, _stats_from_wide, ols_fit, pca_scores, ridge_cv
from .rdm import (
    DegenerateRdmError,
    _rank_pearson,
    average_ranks,
    correlation_rdm,
    euclidean_rdm,
    rsa_score,
)

OK = "ok"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class MethodScore:
    method: str
    model: Optional[str]
    estimate: Optional[float]
    status: str = OK


def _guarded(method, model, compute) -> MethodScore:
    try:
        return MethodScore(method=method, model=model, estimate=float(compute()), status=OK)
    except DegenerateRdmError:
        return MethodScore(method=method, model=model, estimate=None, status=DEGENERATE)


def _feature_rdm(x, feature_metric):
    if feature_metric == "correlation":
        return correlation_rdm(x)
    if feature_metric == "euclidean":
        return euclidean_rdm(x)
    raise ValueError(f"unknown feature metric {feature_metric!r}")


def score_rsa(x, response, feature_metric: str = "correlation", model=None) -> MethodScore:
    """Spearman alignment of the feature RDM with the response RDM.

    The response side always uses Euclidean distance; a 1-D response covers
    the behavioral case, an n x q matrix the voxel case.
    """
    return _guarded(
        "rsa", model, lambda: rsa_score(_feature_rdm(x, feature_metric), euclidean_rdm(response))
    )


def score_pca_rsa(x, response, model=None) -> MethodScore:
    """RSA on all principal component scores of the standardized features."""
    scores = pca_scores(x).scores
    return _guarded(
        "pca_rsa", model, lambda: rsa_score(correlation_rdm(scores), euclidean_rdm(response))
    )


def score_fr_rsa(
    x,
    y,
    rng,
    cv_rng=None,
    split_fraction: float = 0.5,
    folds: int = 10,
    response=None,
    model=None,
) -> MethodScore:
    """RSA on held-out features reweighted by cross-validated ridge coefficients.

    The dataset is shuffled into train/test halves; ridge learns slopes on the
    training half and each test-half feature column is scaled by its
    coefficient before the RDM comparison. The response argument substitutes
    a multivariate (voxel) matrix on the comparison side while ridge always
    targets the scalar y.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(y)
    if n < 20:
        raise ValueError(f"feature reweighting needs at least 20 rows, got {n}")
    if not 0.0 < split_fraction < 1.0:
        raise ValueError("split_fraction must lie strictly between 0 and 1")
    perm = rng.permutation(n)
    n_train = int(round(n * split_fraction))
    train, test = perm[:n_train], perm[n_train:]
    fit = ridge_cv(x[train], y[train], cv_rng if cv_rng is not None else rng, folds=min(folds, n_train // 2))
    weighted = x[test] * fit.coefficients
    comparison = y if response is None else np.asarray(response, dtype=float)

    return _guarded(
        "fr_rsa", model, lambda: rsa_score(correlation_rdm(weighted), euclidean_rdm(comparison[test]))
    )


def score_regression(x, y, model=None) -> MethodScore:
    """OLS adjusted R2 of the response on all features."""
    fit = ols_fit(x, y)
    return MethodScore(method="ols", model=model, estimate=float(fit.r2_adj), status=OK)


def score_lmm(x, v, model=None) -> MethodScore:
    """Conditional R2 of a voxel random-intercept model.

    Row i of v holds the voxel pattern for stimulus i; the long-form expansion
    replicates the stimulus features across voxels.
    """
    fit = _fit_from_stats(_stats_from_wide(x, v), np.asarray(x, dtype=float))
    return MethodScore(method="lmm", model=model, estimate=float(fit.r2_conditional), status=OK)


def _ranks_or_none(build):
    """Condensed-RDM mid-ranks, or None when the RDM carries no rank signal."""
    try:
        values = build()
    except DegenerateRdmError:
        return None
    ranks = average_ranks(values)
    if ranks[0] == ranks[-1] and np.all(ranks == ranks[0]):
        return None
    return ranks


def _paired_rank_score(method, model, feat_ranks, resp_ranks) -> MethodScore:
    if feat_ranks is None or resp_ranks is None:
        return MethodScore(method=method, model=model, estimate=None, status=DEGENERATE)
    return _guarded(method, model, lambda: _rank_pearson(feat_ranks, resp_ranks))


def score_replication(
    dataset,
    methods,
    feature_metric: str = "correlation",
    fr_split_fraction: float = 0.5,
    rng_factory=None,
) -> list:
    """Score every requested method on both models of one replication.

    rng_factory maps a stream label ("fr_split", "cv_folds") to a fresh
    random stream; calling it once per model with the same label hands both
    models identical splits and folds. Rank vectors for RDMs that several
    methods share are computed once.
    """
    voxel = hasattr(dataset, "v_large")
    responses = {
        "large": dataset.v_large if voxel else dataset.y_large,
        "small": dataset.v_small if voxel else dataset.y_small,
    }
    ys = {"large": dataset.y_large, "small": dataset.y_small}
    x = dataset.x

    resp_ranks = {
        m: _ranks_or_none(lambda m=m: euclidean_rdm(responses[m]).values) for m in ("large", "small")
    }

    feat_ranks = pca_ranks = None
    if "rsa" in methods:
        feat_ranks = _ranks_or_none(lambda: _feature_rdm(x, feature_metric).values)
    if "pca_rsa" in methods:
        pca_ranks = _ranks_or_none(lambda: correlation_rdm(pca_scores(x).scores).values)

    out = []
    for method in methods:
        for model in ("large", "small"):
            if method == "rsa":
                out.append(_paired_rank_score("rsa", model, feat_ranks, resp_ranks[model]))
            elif method == "pca_rsa":
                out.append(_paired_rank_score("pca_rsa", model, pca_ranks, resp_ranks[model]))
            elif method == "fr_rsa":
                if rng_factory is None:
                    raise ValueError("fr_rsa needs an rng_factory for its split and fold streams")
                out.append(
                    score_fr_rsa(
                        x,
                        ys[model],
                        rng_factory("fr_split"),
                        cv_rng=rng_factory("cv_folds"),
                        split_fraction=fr_split_fraction,
                        response=responses[model] if voxel else None,
                        model=model,
                    )
                )
            elif method == "ols":
                out.append(score_regression(x, ys[model], model=model))
            elif method == "lmm":
                if not voxel:
                    raise ValueError("lmm requires voxel data")
                out.append(score_lmm(x, responses[model], model=model))
            else:
                raise ValueError(f"unknown method {method!r}")
    return out
