"""Declarative experiment grids, deterministic seeding, parallel execution,
CSV output, and the command-line entry point.

Output contract: results.csv holds one row per (condition, replication,
method, model); summary.csv one row per (condition, method). Floats are
written with 10 significant digits and rows are sorted before writing, so
both files are byte-identical for any worker count.
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from . import __version__
from .metrics import summarize_pairs
from .simgen import (
    CovarianceSpec,
    RadialConfig,
    SimCondition,
    VoxelCondition,
    build_covariance,
    derive_stream,
    generate_replication,
    generate_voxel_replication,
)
from .methods import score_replication

RESULTS_HEADER = "experiment,condition_id,n,noise_var,p,rho_rel,rho_irrel,replication,method,model,estimate,status"
SUMMARY_HEADER = (
    "experiment,condition_id,n,noise_var,p,rho_rel,rho_irrel,method,"
    "mean_large,sd_large,mean_small,sd_small,"
    "interval_lo_large,interval_hi_large,interval_lo_small,interval_hi_small,"
    "cohens_d,accuracy,n_effective"
)

_EXPERIMENTS = ("sim_a", "sim_b", "sim_c", "sim_d", "fmri", "custom")
_METHODS = ("rsa", "pca_rsa", "fr_rsa", "ols", "lmm")
_N_DEFAULT = [100, 200, 300, 400, 500]
_COLLINEARITY_SWEEP = [(0.2, 0.0), (0.2, 0.4), (0.2, 0.8)]
_DEFAULT_METHODS = {
    "sim_a": ["rsa", "ols"],
    "sim_b": ["rsa", "ols"],
    "sim_c": ["rsa", "ols"],
    "sim_d": ["rsa", "pca_rsa", "fr_rsa", "ols"],
    "fmri": ["rsa", "pca_rsa", "fr_rsa", "lmm"],
    "custom": ["rsa", "ols"],
}
_CHUNK = 50


class ConfigError(ValueError):
    """Invalid experiment or pipeline configuration."""


def fmt(value) -> str:
    """Canonical float formatting: 10 significant digits, '.' separator."""
    return f"{value:.10g}"


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    replications: int = 1000
    base_seed: int = 12345
    methods: list = None
    n_values: list = None
    noise_values: list = None
    p_values: list = None
    collinearity: list = None
    fr_split_fraction: float = 0.5
    feature_metric: str = "correlation"
    voxel: bool = False
    workers: int = 1
    output_dir: str = None

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        allowed = set(cls.__dataclass_fields__)
        unknown = sorted(set(raw) - allowed)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        if "experiment" not in raw:
            raise ConfigError("config must name an experiment")
        experiment = raw["experiment"]
        if experiment not in _EXPERIMENTS:
            raise ConfigError(f"unknown experiment {experiment!r}; choose from {_EXPERIMENTS}")

        voxel = bool(raw.get("voxel", experiment == "fmri"))
        if experiment == "fmri" and not voxel:
            raise ConfigError("the fmri experiment is always voxel-based")
        if voxel and experiment not in ("fmri", "custom"):
            raise ConfigError("voxel data is only available for fmri or custom experiments")

        cfg = cls(
            experiment=experiment,
            replications=int(raw.get("replications", 1000)),
            base_seed=int(raw.get("base_seed", 12345)),
            methods=list(raw.get("methods", _DEFAULT_METHODS[experiment])),
            n_values=[int(v) for v in raw.get("n_values", _N_DEFAULT)],
            noise_values=[
                float(v)
                for v in raw.get("noise_values", [5.0, 10.0, 15.0] if experiment == "sim_b" else [5.0])
            ],
            p_values=[int(v) for v in raw.get("p_values", [20, 40, 60] if experiment == "sim_c" else [20])],
            collinearity=[
                (float(a), float(b))
                for a, b in raw.get(
                    "collinearity",
                    _COLLINEARITY_SWEEP if experiment in ("sim_d", "fmri") else [(0.2, 0.2)],
                )
            ],
            fr_split_fraction=float(raw.get("fr_split_fraction", 0.5)),
            feature_metric=raw.get("feature_metric", "correlation"),
            voxel=voxel,
            workers=int(raw.get("workers", 1)),
            output_dir=raw.get("output_dir"),
        )
        cfg._validate()
        return cfg

    def _validate(self):
        if self.replications < 1:
            raise ConfigError("replications must be at least 1")
        if self.base_seed < 0:
            raise ConfigError("base_seed must be nonnegative")
        if not self.methods:
            raise ConfigError("method list must not be empty")
        bad = sorted(set(self.methods) - set(_METHODS))
        if bad:
            raise ConfigError(f"unknown methods: {', '.join(bad)}")
        if "lmm" in self.methods and not self.voxel:
            raise ConfigError("lmm requires a voxel experiment (fmri, or custom with voxel=true)")
        for name in ("n_values", "noise_values", "p_values", "collinearity"):
            if not getattr(self, name):
                raise ConfigError(f"{name} must not be empty")
        if any(n < 3 for n in self.n_values):
            raise ConfigError("every N must be at least 3")
        if any(v < 0 for v in self.noise_values):
            raise ConfigError("noise variances must be nonnegative")
        if any(p < 2 or p % 2 for p in self.p_values):
            raise ConfigError("every p must be a positive even integer")
        for pair in self.collinearity:
            if len(pair) != 2 or not all(0.0 <= r < 1.0 for r in pair):
                raise ConfigError(f"collinearity pairs must be two correlations in [0, 1), got {pair}")
        if not 0.0 < self.fr_split_fraction < 1.0:
            raise ConfigError("fr_split_fraction must lie strictly between 0 and 1")
        if self.feature_metric not in ("correlation", "euclidean"):
            raise ConfigError(f"unknown feature_metric {self.feature_metric!r}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")


def expand_grid(config: ExperimentConfig) -> list:
    """Cartesian product of the configured factor levels, one condition per cell.

    The cross-block covariance entries are drawn once per condition from the
    "cross_corr" stream, so the population is fixed across replications and
    across runs.
    """
    conditions = []
    for n in config.n_values:
        for noise in config.noise_values:
            for p in config.p_values:
                for rho_rel, rho_irrel in config.collinearity:
                    cid = (
                        f"{config.experiment}-n{n:04d}-v{noise:g}-p{p:03d}"
                        f"-r{rho_rel:g}-i{rho_irrel:g}"
                    )
                    spec = CovarianceSpec(p=p, rho_relevant=rho_rel, rho_irrelevant=rho_irrel)
                    sigma = build_covariance(spec, derive_stream(config.base_seed, cid, 0, "cross_corr"))
                    if config.voxel:
                        cond = VoxelCondition(
                            condition_id=cid,
                            n=n,
                            noise_variance=noise,
                            sigma=sigma,
                            radial=RadialConfig(),
                            rho_relevant=rho_rel,
                            rho_irrelevant=rho_irrel,
                        )
                    else:
                        cond = SimCondition(
                            condition_id=cid,
                            n=n,
                            noise_variance=noise,
                            sigma=sigma,
                            rho_relevant=rho_rel,
                            rho_irrelevant=rho_irrel,
                        )
                    conditions.append(cond)
    if not conditions:
        raise ConfigError("experiment grid is empty")
    return conditions


def _score_chunk(args):
    condition, first, last, base_seed, methods, feature_metric, fr_split = args
    voxel = isinstance(condition, VoxelCondition)
    rows = []
    for r in range(first, last):
        if voxel:
            ds = generate_voxel_replication(condition, r, base_seed)
        else:
            ds = generate_replication(condition, r, base_seed)
        factory = lambda label, r=r: derive_stream(base_seed, condition.condition_id, r, label)
        for s in score_replication(
            ds,
            methods,
            feature_metric=feature_metric,
            fr_split_fraction=fr_split,
            rng_factory=factory,
        ):
            rows.append((condition.condition_id, r, s.method, s.model, s.estimate, s.status))
    return rows


def run_experiment(config: ExperimentConfig, out_dir=None, workers=None) -> dict:
    """Run the full grid and write results.csv plus summary.csv.

    Rows are sorted by (condition_id, replication, method, model) before
    writing and the summary is computed from the round-tripped formatted
    estimates, so output bytes do not depend on worker count or scheduling.
    """
    out = Path(out_dir if out_dir is not None else (config.output_dir or "."))
    n_workers = workers if workers is not None else config.workers
    out.mkdir(parents=True, exist_ok=True)
    conditions = expand_grid(config)

    tasks = []
    for cond in conditions:
        for first in range(1, config.replications + 1, _CHUNK):
            last = min(first + _CHUNK, config.replications + 1)
            tasks.append(
                (cond, first, last, config.base_seed, config.methods, config.feature_metric, config.fr_split_fraction)
            )
    if n_workers == 1:
        chunked = map(_score_chunk, tasks)
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            chunked = list(pool.map(_score_chunk, tasks))
    rows = [row for chunk in chunked for row in chunk]
    rows.sort(key=lambda r: (r[0], r[1], r[2], r[3]))

    meta = {
        c.condition_id: (c.n, c.noise_variance, c.sigma.shape[0], c.rho_relevant, c.rho_irrelevant)
        for c in conditions
    }
    lines = [RESULTS_HEADER]
    for cid, rep, method, model, estimate, status in rows:
        n, noise, p, rho_rel, rho_irrel = meta[cid]
        est_str = "" if estimate is None else fmt(estimate)
        lines.append(
            f"{config.experiment},{cid},{n},{fmt(noise)},{p},{fmt(rho_rel)},{fmt(rho_irrel)},"
            f"{rep},{method},{model},{est_str},{status}"
        )
    results_path = out / "results.csv"
    results_path.write_text("\n".join(lines) + "\n")

    summary_path = out / "summary.csv"
    summary_path.write_text("\n".join(_summary_lines(config, rows, meta)) + "\n")
    return {"results": results_path, "summary": summary_path}


def _summary_lines(config, rows, meta) -> list:
    # round-trip through the output format so the file is exactly
    # recomputable from results.csv
    groups = {}
    for cid, rep, method, model, estimate, _ in rows:
        est = None if estimate is None else float(fmt(estimate))
        groups.setdefault((cid, method), {}).setdefault(rep, {})[model] = est
    lines = [SUMMARY_HEADER]
    for (cid, method) in sorted(groups):
        reps = groups[(cid, method)]
        pairs = [(reps[r].get("large"), reps[r].get("small")) for r in sorted(reps)]
        s = summarize_pairs(method, pairs)
        n, noise, p, rho_rel, rho_irrel = meta[cid]
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
        lines.append(
            f"{config.experiment},{cid},{n},{fmt(noise)},{p},{fmt(rho_rel)},{fmt(rho_irrel)},{method},"
            + ",".join(fmt(v) for v in stats)
            + f",{s.n_effective}"
        )
    return lines


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="rsacompare",
        description="Monte Carlo comparison of regression and RSA model selection",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a simulation experiment grid")
    sim.add_argument("--config", required=True, help="JSON experiment configuration")
    sim.add_argument("--out", required=True, help="output directory for CSV files")
    sim.add_argument("--workers", type=int, default=None, help="worker process count")
    sim.add_argument("--seed", type=int, default=None, help="override the base seed")

    emp = sub.add_parser("empirical", help="run the subsampling comparison on a norms CSV")
    emp.add_argument("--data", required=True, help="input norms CSV")
    emp.add_argument("--config", required=True, help="JSON pipeline configuration")
    emp.add_argument("--out", required=True, help="output directory for CSV files")

    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            _cmd_simulate(args)
        else:
            _cmd_empirical(args)
    except (ConfigError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3
    return 0


def _load_json_object(path_str):
    raw = json.loads(Path(path_str).read_text())
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    return raw


def _cmd_simulate(args):
    cfg = ExperimentConfig.from_dict(_load_json_object(args.config))
    if args.seed is not None:
        cfg = replace(cfg, base_seed=args.seed)
    run_experiment(cfg, out_dir=args.out, workers=args.workers)


def _cmd_empirical(args):
    from .empirical import run_empirical

    run_empirical(args.data, _load_json_object(args.config), args.out)


if __name__ == "__main__":
    # re-import under the canonical name so exception classes match the
    # ones raised by sibling modules
    from rsacompare.harness import main as _main

    sys.exit(_main())
