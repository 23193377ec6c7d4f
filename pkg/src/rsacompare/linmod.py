"""Linear-model numerics: OLS with adjusted R2, PCA scores, cross-validated
ridge regression, and a random-intercept mixed model with conditional R2."""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

_LOG_THETA_LO = np.log(1e-8)
_LOG_THETA_HI = np.log(1e8)
_COARSE_POINTS = 129


@dataclass(frozen=True)
class OlsFit:
    beta_hat: np.ndarray  # intercept first
    r2: float
    r2_adj: float


@dataclass(frozen=True)
class PcaBasis:
    column_means: np.ndarray
    column_scales: np.ndarray
    loadings: np.ndarray  # p x k, orthonormal columns
    scores: np.ndarray  # n x k


@dataclass(frozen=True)
class RidgeFit:
    lam: float
    coefficients: np.ndarray  # original feature scale
    intercept: float
    cv_mse_curve: np.ndarray


@dataclass(frozen=True)
class LmmFit:
    beta_hat: np.ndarray  # intercept first
    sigma_alpha2: float
    sigma_eps2: float
    sigma_f2: float
    r2_conditional: float


def ols_fit(x, y) -> OlsFit:
    """Least squares via orthogonal decomposition, with adjusted R2.

    Raises when n <= p + 1 (the adjustment denominator is non-positive) or
    when the design with intercept is rank deficient.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = x.shape
    if n <= p + 1:
        raise ValueError(f"need n > p + 1 for adjusted R2, got n={n}, p={p}")
    design = np.column_stack([np.ones(n), x])
    beta, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < p + 1:
        raise ValueError("design matrix with intercept is rank deficient")
    resid = y - design @ beta
    sst = float((y - y.mean()) @ (y - y.mean()))
    if sst == 0:
        raise ValueError("constant response: R2 undefined")
    r2 = 1.0 - float(resid @ resid) / sst
    r2_adj = 1.0 - (1.0 - r2) * (n - 1) / (n - p - 1)
    return OlsFit(beta_hat=beta, r2=r2, r2_adj=r2_adj)


def pca_scores(x) -> PcaBasis:
    """All min(n-1, p) principal component scores of the standardized features.

    Component signs are fixed deterministically (largest-magnitude loading
    entry positive) so repeated calls are bit-identical.
    """
    x = np.asarray(x, dtype=float)
    n, p = x.shape
    if n < 2:
        raise ValueError("PCA needs at least 2 rows")
    mu = x.mean(axis=0)
    sd = x.std(axis=0, ddof=1)
    dead = np.flatnonzero(sd == 0)
    if dead.size:
        raise ValueError(f"zero-variance column {dead[0]}: cannot standardize")
    z = (x - mu) / sd
    u, s, vt = np.linalg.svd(z, full_matrices=False)
    k = min(n - 1, p)
    u, s, vt = u[:, :k], s[:k], vt[:k]
    flip = np.sign(vt[np.arange(k), np.argmax(np.abs(vt), axis=1)])
    flip[flip == 0] = 1.0
    vt = vt * flip[:, None]
    scores = u * (s * flip)
    return PcaBasis(column_means=mu, column_scales=sd, loadings=vt.T, scores=scores)


def _ridge_path(z_train, y_train, lambdas):
    """Standardized-scale coefficients for every lambda, via one SVD."""
    yc = y_train - y_train.mean()
    u, s, vt = np.linalg.svd(z_train, full_matrices=False)
    uty = u.T @ yc
    shrink = s[:, None] / (s[:, None] ** 2 + len(y_train) * lambdas[None, :])
    return vt.T @ (shrink * uty[:, None])


def ridge_cv(x, y, rng, folds: int = 10, lambdas=None) -> RidgeFit:
    """Ridge regression with a CV-selected penalty.

    Features are standardized with training-fold statistics and the intercept
    is unpenalized. The default grid is 100 geometrically spaced values from
    lambda_max = max |z^T y| / n down to 1e-4 * lambda_max. Folds are
    contiguous blocks of a seeded shuffle. Coefficients come back on the
    original feature scale.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = x.shape
    if n < 2 * folds:
        raise ValueError(f"need at least {2 * folds} rows for {folds}-fold CV, got {n}")
    mu = x.mean(axis=0)
    sd = x.std(axis=0, ddof=1)
    if np.any(sd == 0):
        raise ValueError("zero-variance feature: cannot standardize for ridge")
    z = (x - mu) / sd
    if lambdas is None:
        lam_max = float(np.max(np.abs(z.T @ y))) / n
        if lam_max <= 0:
            lambdas = np.array([0.0])
        else:
            lambdas = np.geomspace(lam_max, 1e-4 * lam_max, 100)
    else:
        lambdas = np.asarray(lambdas, dtype=float)

    perm = rng.permutation(n)
    blocks = np.array_split(perm, folds)
    cv_mse = np.zeros(len(lambdas))
    for held in range(folds):
        val = blocks[held]
        train = np.concatenate([blocks[b] for b in range(folds) if b != held])
        xt = x[train]
        mt = xt.mean(axis=0)
        st = xt.std(axis=0, ddof=1)
        st[st == 0] = 1.0
        betas = _ridge_path((xt - mt) / st, y[train], lambdas)
        pred = y[train].mean() + ((x[val] - mt) / st) @ betas
        cv_mse += np.mean((y[val][:, None] - pred) ** 2, axis=0)
    cv_mse /= folds

    lam = float(lambdas[int(np.argmin(cv_mse))])
    beta_std = _ridge_path(z, y, np.array([lam]))[:, 0]
    coefficients = beta_std / sd
    intercept = float(y.mean() - mu @ coefficients)
    return RidgeFit(lam=lam, coefficients=coefficients, intercept=intercept, cv_mse_curve=cv_mse)


def conditional_r2(sigma_f2: float, sigma_alpha2: float, sigma_eps2: float) -> float:
    """Share of variance explained by fixed plus random effects."""
    return (sigma_f2 + sigma_alpha2) / (sigma_f2 + sigma_alpha2 + sigma_eps2)


@dataclass(frozen=True)
class _RemlStats:
    """Sufficient statistics for the grouped random-intercept REML profile.

    With V0 = I + theta * 1 1^T per group, (I + theta 1 1^T)^{-1} =
    I - c 1 1^T where c = theta / (1 + m theta), so every GLS quantity
    reduces to group sums.
    """

    gram: np.ndarray  # X^T X over all rows, intercept included
    group_outer: np.ndarray  # sum_j s_j s_j^T with s_j the group column sums
    xty: np.ndarray
    sxty: np.ndarray  # sum_j s_j t_j with t_j the group response sums
    y2: float
    t2: float  # sum_j t_j^2
    m: int  # rows per group
    n_groups: int
    n_rows: int
    q: int


def _stats_from_long(x_long, voxel_id, y_long) -> _RemlStats:
    x_long = np.asarray(x_long, dtype=float)
    y_long = np.asarray(y_long, dtype=float)
    labels, inverse = np.unique(np.asarray(voxel_id), return_inverse=True)
    n_groups = len(labels)
    if n_groups < 2:
        raise ValueError("need at least 2 voxels for a random intercept")
    counts = np.bincount(inverse)
    if not np.all(counts == counts[0]):
        raise ValueError("unbalanced design: every stimulus must appear at every voxel")
    design = np.column_stack([np.ones(len(y_long)), x_long])
    q = design.shape[1]
    group_sums = np.zeros((n_groups, q))
    np.add.at(group_sums, inverse, design)
    t = np.bincount(inverse, weights=y_long)
    return _RemlStats(
        gram=design.T @ design,
        group_outer=group_sums.T @ group_sums,
        xty=design.T @ y_long,
        sxty=group_sums.T @ t,
        y2=float(y_long @ y_long),
        t2=float(t @ t),
        m=int(counts[0]),
        n_groups=n_groups,
        n_rows=len(y_long),
        q=q,
    )


def _stats_from_wide(x, v) -> _RemlStats:
    """Same statistics for the balanced case where every voxel shares the
    stimulus design: group j holds rows (X, V[:, j])."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    n, j = v.shape
    if j < 2:
        raise ValueError("need at least 2 voxels for a random intercept")
    design = np.column_stack([np.ones(n), x])
    s = design.sum(axis=0)
    t = v.sum(axis=0)
    return _RemlStats(
        gram=j * (design.T @ design),
        group_outer=j * np.outer(s, s),
        xty=design.T @ v.sum(axis=1),
        sxty=s * t.sum(),
        y2=float(np.einsum("ij,ij->", v, v)),
        t2=float(t @ t),
        m=n,
        n_groups=j,
        n_rows=n * j,
        q=design.shape[1],
    )


def _gls_solve(stats: _RemlStats, theta: float):
    """Return (beta, logdet XWX, r^T W r, logdet V0) at a variance ratio theta."""
    c = theta / (1.0 + stats.m * theta)
    a = stats.gram - c * stats.group_outer
    xwy = stats.xty - c * stats.sxty
    ywy = stats.y2 - c * stats.t2
    chol = np.linalg.cholesky(a)
    beta = np.linalg.solve(chol.T, np.linalg.solve(chol, xwy))
    rwr = ywy - float(beta @ xwy)
    logdet_a = 2.0 * float(np.sum(np.log(np.diag(chol))))
    logdet_v0 = stats.n_groups * np.log1p(stats.m * theta)
    return beta, logdet_a, rwr, logdet_v0


def _criterion(stats: _RemlStats, theta: float) -> float:
    try:
        _, logdet_a, rwr, logdet_v0 = _gls_solve(stats, theta)
    except np.linalg.LinAlgError:
        return np.inf
    if rwr <= 0:
        return np.inf
    return logdet_v0 + logdet_a + (stats.n_rows - stats.q) * np.log(rwr)


def _optimize_theta(stats: _RemlStats) -> float:
    """Profiled REML minimizer: coarse log-grid scan then bounded refinement."""
    log_grid = np.linspace(_LOG_THETA_LO, _LOG_THETA_HI, _COARSE_POINTS)
    values = [_criterion(stats, np.exp(t)) for t in log_grid]
    i = int(np.argmin(values))
    lo = log_grid[max(i - 1, 0)]
    hi = log_grid[min(i + 1, len(log_grid) - 1)]
    result = minimize_scalar(
        lambda t: _criterion(stats, np.exp(t)),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-10},
    )
    if not result.success:
        raise ValueError(f"REML profile search failed to converge in [{lo}, {hi}]")
    candidates = [np.exp(result.x), np.exp(log_grid[i])]
    return min(candidates, key=lambda t: _criterion(stats, t))


def _fit_from_stats(stats: _RemlStats, fixed_rows) -> LmmFit:
    theta = _optimize_theta(stats)
    beta, _, rwr, _ = _gls_solve(stats, theta)
    sigma_eps2 = rwr / (stats.n_rows - stats.q)
    sigma_alpha2 = theta * sigma_eps2
    pred = beta[0] + fixed_rows @ beta[1:]
    sigma_f2 = float(np.var(pred))  # population variance by convention
    return LmmFit(
        beta_hat=beta,
        sigma_alpha2=float(sigma_alpha2),
        sigma_eps2=float(sigma_eps2),
        sigma_f2=sigma_f2,
        r2_conditional=float(conditional_r2(sigma_f2, sigma_alpha2, sigma_eps2)),
    )


def reml_criterion(x_long, voxel_id, y_long, theta: float) -> float:
    """Profiled REML objective (lower is better) at a given variance ratio.

    Exposed so the optimizer can be audited against a dense grid.
    """
    return _criterion(_stats_from_long(x_long, voxel_id, y_long), theta)


def lmm_fit(x_long, voxel_id, y_long) -> LmmFit:
    """REML fit of a random-intercept model on long-form (stimulus, voxel) rows.

    The single variance ratio theta = sigma_alpha^2 / sigma_eps^2 is profiled
    out and optimized over log theta in [1e-8, 1e8].
    """
    stats = _stats_from_long(x_long, voxel_id, y_long)
    return _fit_from_stats(stats, np.asarray(x_long, dtype=float))
