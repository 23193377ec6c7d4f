"""Regression-vs-RSA comparison on user-supplied tabular norm datasets.

The input is a CSV with one row per item, a numeric response column, and
named predictor columns grouped into composites. Each (size, resample) cell
draws a random subsample without replacement and scores every requested
method once per composite; the composite listed first in the config plays
the "large" role in the summary.
"""

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .harness import RESULTS_HEADER, SUMMARY_HEADER, ConfigError, fmt
from .metrics import summarize_pairs
from .methods import score_fr_rsa, score_pca_rsa, score_regression, score_rsa
from .simgen import derive_stream

_DEFAULT_SIZES = [50, 100, 200, 300, 400, 500]
_EMPIRICAL_METHODS = ("rsa", "pca_rsa", "fr_rsa", "ols")


@dataclass(frozen=True)
class NormDataset:
    """Complete-case norms table restricted to the analysis columns."""

    response: np.ndarray
    predictors: dict  # column name -> values
    composites: dict  # composite name -> member column names
    n_dropped: int

    @property
    def n_rows(self) -> int:
        return len(self.response)

    def matrix(self, composite: str) -> np.ndarray:
        return np.column_stack([self.predictors[c] for c in self.composites[composite]])


def load_norms(path, response_column: str, composite_specs: dict) -> NormDataset:
    """Read the CSV, keeping only rows numeric in every analysis column."""
    if not composite_specs:
        raise ConfigError("at least one composite must be defined")
    for name, members in composite_specs.items():
        if len(members) < 2:
            raise ConfigError(f"composite {name!r} needs at least 2 predictor columns")
    needed = [response_column] + sorted({c for cols in composite_specs.values() for c in cols})
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in needed if c not in header]
        if missing:
            raise ConfigError(f"missing column {missing[0]!r} in {path}")
        kept = {c: [] for c in needed}
        n_dropped = 0
        for row in reader:
            try:
                values = {c: float(row[c]) for c in needed}
            except (TypeError, ValueError):
                n_dropped += 1
                continue
            if any(not np.isfinite(v) for v in values.values()):
                n_dropped += 1
                continue
            for c in needed:
                kept[c].append(values[c])
    if not kept[response_column]:
        raise ConfigError(f"no complete rows in {path}")
    return NormDataset(
        response=np.array(kept[response_column]),
        predictors={c: np.array(kept[c]) for c in needed if c != response_column},
        composites={name: list(cols) for name, cols in composite_specs.items()},
        n_dropped=n_dropped,
    )


def subsample_compare(
    data: NormDataset,
    sizes,
    resamples: int,
    methods,
    base_seed: int,
    fr_split_fraction: float = 0.5,
    feature_metric: str = "correlation",
    standardize: bool = False,
) -> list:
    """Score every method on every composite over the subsampling grid.

    Returns rows shaped like the simulation results (composite name in the
    model column). Streams are derived per (size, resample), so records do
    not depend on loop order and a seed pins them exactly.
    """
    bad = sorted(set(methods) - set(_EMPIRICAL_METHODS))
    if bad:
        raise ConfigError(f"methods not available on norm data: {', '.join(bad)}")
    sizes = [int(s) for s in sizes]
    if max(sizes) > data.n_rows:
        raise ConfigError(f"subsample size {max(sizes)} exceeds the {data.n_rows} available rows")
    if "fr_rsa" in methods and min(sizes) < 20:
        raise ConfigError("fr_rsa needs subsamples of at least 20 rows")

    rows = []
    for size in sizes:
        cid = f"empirical-n{size:04d}"
        for resample in range(1, resamples + 1):
            draw = derive_stream(base_seed, cid, resample, "subsample")
            idx = draw.choice(data.n_rows, size=size, replace=False)
            y = data.response[idx]
            for composite in data.composites:
                x = data.matrix(composite)[idx]
                if standardize:
                    x = (x - x.mean(axis=0)) / x.std(axis=0, ddof=1)
                for method in methods:
                    if method == "rsa":
                        score = score_rsa(x, y, feature_metric=feature_metric)
                    elif method == "pca_rsa":
                        score = score_pca_rsa(x, y)
                    elif method == "fr_rsa":
                        score = score_fr_rsa(
                            x,
                            y,
                            derive_stream(base_seed, cid, resample, "fr_split"),
                            cv_rng=derive_stream(base_seed, cid, resample, "cv_folds"),
                            split_fraction=fr_split_fraction,
                        )
                    else:
                        score = score_regression(x, y)
                    rows.append((cid, size, resample, score.method, composite, score.estimate, score.status))
    return rows


def write_synthetic_norms(path, n_rows: int = 3000, seed: int = 0) -> Path:
    """Bundled stand-in dataset with one strong and one weak composite.

    Five "strong" columns share a latent factor that drives most of the
    response; five "weak" columns share a second latent with a much smaller
    contribution. The loadings vary across columns so the latent also shapes
    each row's profile and survives the row-centering inside correlation
    RDMs; equal loadings would cancel there and leave rank methods blind to
    the factor. Useful for exercising the full pipeline without licensed
    norm data.
    """
    rng = np.random.default_rng(seed)
    loadings = np.array([1.5, 1.2, 0.9, 0.6, 0.3])
    f = rng.standard_normal(n_rows)
    g = rng.standard_normal(n_rows)
    strong = f[:, None] * loadings + 0.6 * rng.standard_normal((n_rows, 5))
    weak = g[:, None] * loadings + 0.6 * rng.standard_normal((n_rows, 5))
    response = 1.3 * f + 0.55 * g + rng.standard_normal(n_rows)
    header = ["word", "response"] + [f"strong_{k}" for k in range(1, 6)] + [f"weak_{k}" for k in range(1, 6)]
    lines = [",".join(header)]
    for i in range(n_rows):
        cells = [f"w{i:05d}", fmt(response[i])]
        cells += [fmt(v) for v in strong[i]]
        cells += [fmt(v) for v in weak[i]]
        lines.append(",".join(cells))
    path = Path(path)
    path.write_text("\n".join(lines) + "\n")
    return path


_EMPIRICAL_CONFIG_KEYS = {
    "response_column",
    "composites",
    "sizes",
    "resamples",
    "methods",
    "base_seed",
    "fr_split_fraction",
    "feature_metric",
    "standardize",
}


def run_empirical(data_path, raw_cfg: dict, out_dir) -> dict:
    """CSV-to-CSV pipeline: load norms, subsample, score, summarize."""
    unknown = sorted(set(raw_cfg) - _EMPIRICAL_CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    for required in ("response_column", "composites"):
        if required not in raw_cfg:
            raise ConfigError(f"config must define {required!r}")
    composites = raw_cfg["composites"]
    if not isinstance(composites, dict) or len(composites) < 2:
        raise ConfigError("composites must map at least 2 names to column lists")

    data = load_norms(data_path, raw_cfg["response_column"], composites)
    rows = subsample_compare(
        data,
        sizes=raw_cfg.get("sizes", _DEFAULT_SIZES),
        resamples=int(raw_cfg.get("resamples", 100)),
        methods=list(raw_cfg.get("methods", list(_EMPIRICAL_METHODS))),
        base_seed=int(raw_cfg.get("base_seed", 12345)),
        fr_split_fraction=float(raw_cfg.get("fr_split_fraction", 0.5)),
        feature_metric=raw_cfg.get("feature_metric", "correlation"),
        standardize=bool(raw_cfg.get("standardize", False)),
    )
    rows.sort(key=lambda r: (r[0], r[2], r[3], r[4]))

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = [RESULTS_HEADER]
    for cid, size, resample, method, composite, estimate, status in rows:
        est_str = "" if estimate is None else fmt(estimate)
        lines.append(f"empirical,{cid},{size},,,,,{resample},{method},{composite},{est_str},{status}")
    results_path = out / "results.csv"
    results_path.write_text("\n".join(lines) + "\n")

    # the composite listed first plays the "large" role in the summary
    first, second = list(composites)[:2]
    groups = {}
    for cid, size, resample, method, composite, estimate, _ in rows:
        est = None if estimate is None else float(fmt(estimate))
        groups.setdefault((cid, size, method), {}).setdefault(resample, {})[composite] = est
    summary = [SUMMARY_HEADER]
    for (cid, size, method) in sorted(groups, key=lambda k: (k[0], k[2])):
        reps = groups[(cid, size, method)]
        pairs = [(reps[r].get(first), reps[r].get(second)) for r in sorted(reps)]
        s = summarize_pairs(method, pairs)
        stats = [
            s.mean_large,
            s.sd_large,
            s.mean_small,
            s.sd_small,
            s.interval_large[0],
            s.interval_large[1],
            s.interval_small[0],
            s.interval_small[1],
            s.cohens_d,
            s.accuracy,
        ]
        summary.append(
            f"empirical,{cid},{size},,,,,{method}," + ",".join(fmt(v) for v in stats) + f",{s.n_effective}"
        )
    summary_path = out / "summary.csv"
    summary_path.write_text("\n".join(summary) + "\n")
    return {"results": results_path, "summary": summary_path}
