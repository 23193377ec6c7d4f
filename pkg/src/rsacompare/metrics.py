"""Aggregation of per-replication estimates into comparison metrics."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ComparisonSummary:
    """Condition-level comparison of the two models under one method."""

    method: str
    mean_large: float
    sd_large: float
    mean_small: float
    sd_small: float
    interval_large: tuple
    interval_small: tuple
    cohens_d: float
    accuracy: float
    n_effective: int


def interval(values) -> tuple:
    """[mean - SD, mean + SD] with the sample (n-1) standard deviation."""
    values = np.asarray(values, dtype=float)
    if len(values) < 2:
        raise ValueError("interval needs at least 2 values")
    mean = values.mean()
    sd = values.std(ddof=1)
    return (float(mean - sd), float(mean + sd))


def cohens_d(large, small) -> float:
    """Standardized mean difference with pooled SD sqrt((sd_l^2 + sd_s^2)/2)."""
    large = np.asarray(large, dtype=float)
    small = np.asarray(small, dtype=float)
    if len(large) < 2 or len(small) < 2:
        raise ValueError("cohens_d needs at least 2 values per group")
    pooled = np.sqrt((large.var(ddof=1) + small.var(ddof=1)) / 2.0)
    if pooled == 0:
        raise ValueError("zero pooled SD: effect size undefined")
    return float((large.mean() - small.mean()) / pooled)


def selection_accuracy(paired) -> float:
    """Fraction of pairs where the larger-effect estimate strictly wins.

    Ties count as incorrect.
    """
    paired = list(paired)
    if not paired:
        raise ValueError("selection accuracy over an empty set")
    wins = sum(1 for est_large, est_small in paired if est_large > est_small)
    return wins / len(paired)


def summarize_pairs(method: str, pairs) -> ComparisonSummary:
    """Aggregate (estimate_large, estimate_small) pairs for one method.

    Pairs with a missing member (degenerate score) are excluded pairwise;
    n_effective reports how many replications survive.
    """
    kept = [(l, s) for l, s in pairs if l is not None and s is not None]
    if len(kept) < 2:
        raise ValueError("need at least 2 usable replications to summarize")
    large = np.array([l for l, _ in kept])
    small = np.array([s for _, s in kept])
    return ComparisonSummary(
        method=method,
        mean_large=float(large.mean()),
        sd_large=float(large.std(ddof=1)),
        mean_small=float(small.mean()),
        sd_small=float(small.std(ddof=1)),
        interval_large=interval(large),
        interval_small=interval(small),
        cohens_d=cohens_d(large, small),
        accuracy=selection_accuracy(kept),
        n_effective=len(kept),
    )
