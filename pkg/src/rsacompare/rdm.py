"""Condensed dissimilarity matrices and tie-aware Spearman rank correlation.

The condensed layout is the lower triangle in row-major order, i.e. pairs
(2,1), (3,1), (3,2), (4,1), ... in 1-based item indices. Both RDMs entering
a comparison use the same layout, so downstream rank statistics never depend
on it.
"""

from dataclasses import dataclass

import numpy as np


class DegenerateRdmError(ValueError):
    """Raised when a dissimilarity vector carries no rank information."""


@dataclass(frozen=True)
class Rdm:
    """Condensed dissimilarity matrix over n_items items.

    Attributes:
        n_items: number of items the pairwise entries refer to.
        values: length n_items*(n_items-1)/2 vector, lower triangle row-major.
        metric: "correlation" or "euclidean".
    """

    n_items: int
    values: np.ndarray
    metric: str

    def __post_init__(self):
        m = self.n_items * (self.n_items - 1) // 2
        if len(self.values) != m:
            raise ValueError(f"expected {m} condensed entries, got {len(self.values)}")


def correlation_rdm(x) -> Rdm:
    """Pairwise correlation distance 1 - r between rows of a feature matrix.

    Rows are centered before the correlation, so adding a constant to any
    single row leaves the result unchanged.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[1] < 2:
        raise ValueError("correlation distance needs at least 2 features per row")
    centered = x - x.mean(axis=1, keepdims=True)
    norms = np.sqrt(np.einsum("ij,ij->i", centered, centered))
    bad = np.flatnonzero(norms == 0)
    if bad.size:
        raise DegenerateRdmError(f"constant row {bad[0]}: correlation undefined")
    r = (centered / norms[:, None]) @ (centered / norms[:, None]).T
    values = 1.0 - r[np.tril_indices(x.shape[0], -1)]
    # clamp the handful of entries that roundoff pushes past [0, 2]
    np.clip(values, 0.0, 2.0, out=values)
    return Rdm(n_items=x.shape[0], values=values, metric="correlation")


def euclidean_rdm(y) -> Rdm:
    """Pairwise Euclidean distance between rows; absolute difference for 1-D input."""
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    i, j = np.tril_indices(n, -1)
    if y.ndim == 1:
        # exact for scalars, so tied responses stay tied after the sqrt
        values = np.abs(y[i] - y[j])
    else:
        sq = np.einsum("ij,ij->i", y, y)
        d2 = sq[i] + sq[j] - 2.0 * (y @ y.T)[i, j]
        values = np.sqrt(np.clip(d2, 0.0, None))
    return Rdm(n_items=n, values=values, metric="euclidean")


def average_ranks(v) -> np.ndarray:
    """Ranks 1..m with tied values sharing the mean of their rank span."""
    v = np.asarray(v, dtype=float)
    order = np.argsort(v, kind="stable")
    sv = v[order]
    # boundaries of runs of equal values in the sorted vector
    starts = np.flatnonzero(np.r_[True, sv[1:] != sv[:-1]])
    ends = np.r_[starts[1:], len(sv)]
    mid = (starts + 1 + ends) / 2.0  # mean of ranks start+1 .. end
    ranks = np.empty(len(sv))
    ranks[order] = np.repeat(mid, ends - starts)
    return ranks


def _rank_pearson(ra: np.ndarray, rb: np.ndarray) -> float:
    """Pearson correlation of two rank vectors; errors when either is constant."""
    da = ra - ra.mean()
    db = rb - rb.mean()
    na = np.sqrt(da @ da)
    nb = np.sqrt(db @ db)
    if na == 0 or nb == 0:
        raise DegenerateRdmError("degenerate RDM: constant ranks")
    return float(np.clip((da @ db) / (na * nb), -1.0, 1.0))


def spearman(a, b) -> float:
    """Tie-aware Spearman correlation: Pearson on mid-ranks.

    Reduces to the classical 1 - 6*sum(d^2)/(m(m^2-1)) form when no ties
    are present.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("spearman expects two equal-length vectors")
    if len(a) < 3:
        raise ValueError("spearman needs at least 3 pairs")
    return _rank_pearson(average_ranks(a), average_ranks(b))


def rsa_score(rdm_x: Rdm, rdm_y: Rdm) -> float:
    """Spearman correlation between two condensed RDMs over the same items."""
    if rdm_x.n_items != rdm_y.n_items:
        raise ValueError(
            f"RDMs cover different item counts: {rdm_x.n_items} vs {rdm_y.n_items}"
        )
    return spearman(rdm_x.values, rdm_y.values)
