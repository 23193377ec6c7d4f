"""Panel renderers over the harness CSV schemas.

Every renderer takes a loaded Table plus an output path and writes one PNG.
Facet columns are discovered from the file: any factor column with more than
one distinct value becomes a panel dimension, so the same renderer serves a
single-factor grid and a full sweep.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .style import STYLE, color_map

matplotlib.rcParams.update(STYLE)

_FACTOR_COLUMNS = ("experiment", "noise_var", "p", "rho_rel", "rho_irrel")
_INTERVAL_COLUMNS = (
    "mean_large",
    "mean_small",
    "interval_lo_large",
    "interval_hi_large",
    "interval_lo_small",
    "interval_hi_small",
)
_ROLE_COLORS = (("large", "tab:blue"), ("small", "tab:orange"))
# a fixed Software tag replaces the matplotlib version string, so output
# bytes do not change under a point upgrade of the library
_PNG_META = {"Software": "rsacompare-figures"}


def _num(text):
    try:
        return float(text)
    except (TypeError, ValueError):
        return None


def _level_key(value: str):
    # numeric levels sort numerically, everything else lexically after them
    num = _num(value)
    return (0, num, "") if num is not None else (1, 0.0, value)


def _facets(table):
    """Factor columns that vary in this file, with their sorted value tuples."""
    varying = [
        col
        for col in _FACTOR_COLUMNS
        if col in table.columns and len({row[col] for row in table.rows}) > 1
    ]
    combos = sorted(
        {tuple(row[c] for c in varying) for row in table.rows},
        key=lambda combo: tuple(_level_key(v) for v in combo),
    )
    return varying, combos


def _combo_label(columns, combo) -> str:
    return ", ".join(f"{c}={v}" for c, v in zip(columns, combo))


def _match(row, columns, combo) -> bool:
    return all(row[c] == v for c, v in zip(columns, combo))


def _methods(rows) -> list:
    return sorted({row["method"] for row in rows})


def _save(fig, out_path):
    fig.savefig(out_path, metadata=_PNG_META)
    plt.close(fig)
    return out_path


def _line_panel(table, out_path, value_column, ylabel, ylim=None, chance=None):
    table.require(("n", "method", value_column), out_path.stem)
    columns, combos = _facets(table)
    methods = _methods(table.rows)
    colors = color_map(methods)
    fig, axes = plt.subplots(
        1, len(combos), figsize=(3.2 * len(combos) + 0.8, 3.0), squeeze=False
    )
    for k, combo in enumerate(combos):
        ax = axes[0][k]
        for method in methods:
            points = sorted(
                (_num(row["n"]), value)
                for row in table.rows
                if row["method"] == method
                and _match(row, columns, combo)
                and (value := _num(row[value_column])) is not None
            )
            if points:
                ax.plot(
                    [p[0] for p in points],
                    [p[1] for p in points],
                    marker="o",
                    markersize=3,
                    color=colors[method],
                    label=method,
                )
        if chance is not None:
            ax.axhline(chance, color="gray", linestyle="--", linewidth=0.8)
        if ylim is not None:
            ax.set_ylim(*ylim)
        ax.set_xlabel("sample size")
        if columns:
            ax.set_title(_combo_label(columns, combo))
    axes[0][0].set_ylabel(ylabel)
    axes[0][0].legend()
    return _save(fig, out_path)


def accuracy_lines(table, out_path):
    """Selection accuracy over sample size, one line per method, panel per factor level."""
    return _line_panel(
        table, out_path, "accuracy", "selection accuracy", ylim=(0.0, 1.05), chance=0.5
    )


def cohens_d_lines(table, out_path):
    """Estimate separation (Cohen's d) over sample size, one line per method."""
    return _line_panel(table, out_path, "cohens_d", "estimate separation (Cohen's d)")


def _interval_points(rows, role):
    points = []
    for row in rows:
        n = _num(row["n"])
        mean = _num(row[f"mean_{role}"])
        lo = _num(row[f"interval_lo_{role}"])
        hi = _num(row[f"interval_hi_{role}"])
        if None not in (n, mean, lo, hi):
            points.append((n, mean, lo, hi))
    points.sort()
    return points


def interval_panels(table, out_path):
    """Mean with interval for both models, per method and factor level, across N."""
    table.require(("n", "method") + _INTERVAL_COLUMNS, "interval_panels")
    columns, combos = _facets(table)
    methods = _methods(table.rows)
    fig, axes = plt.subplots(
        len(combos),
        len(methods),
        figsize=(2.9 * len(methods) + 0.6, 2.6 * len(combos) + 0.4),
        squeeze=False,
    )
    for r, combo in enumerate(combos):
        for c, method in enumerate(methods):
            ax = axes[r][c]
            rows = [
                row
                for row in table.rows
                if row["method"] == method and _match(row, columns, combo)
            ]
            for shift, (role, color) in zip((-1, 1), _ROLE_COLORS):
                points = _interval_points(rows, role)
                if not points:
                    continue
                xs = np.array([p[0] for p in points])
                span = xs.max() - xs.min()
                xs = xs + shift * 0.008 * (span if span > 0 else 1.0)
                ax.errorbar(
                    xs,
                    [p[1] for p in points],
                    yerr=[
                        [p[1] - p[2] for p in points],
                        [p[3] - p[1] for p in points],
                    ],
                    fmt="o",
                    markersize=3,
                    capsize=2,
                    color=color,
                    label=role,
                )
            ax.set_title(
                method if not columns else f"{method} | {_combo_label(columns, combo)}"
            )
    for ax in axes[-1]:
        ax.set_xlabel("sample size")
    for r in range(len(combos)):
        axes[r][0].set_ylabel("estimate")
    axes[0][0].legend()
    return _save(fig, out_path)


def empirical_intervals(table, out_path):
    """Per-method mean lines with interval bands over subsample size.

    Factor columns are ignored; empirical summaries leave them blank.
    """
    table.require(("n", "method") + _INTERVAL_COLUMNS, "empirical_intervals")
    methods = _methods(table.rows)
    fig, axes = plt.subplots(
        1,
        len(methods),
        figsize=(3.0 * len(methods) + 0.6, 3.0),
        squeeze=False,
        sharey=True,
    )
    for c, method in enumerate(methods):
        ax = axes[0][c]
        rows = [row for row in table.rows if row["method"] == method]
        for role, color in _ROLE_COLORS:
            points = _interval_points(rows, role)
            if not points:
                continue
            xs = [p[0] for p in points]
            ax.fill_between(
                xs,
                [p[2] for p in points],
                [p[3] for p in points],
                color=color,
                alpha=0.25,
                linewidth=0,
            )
            ax.plot(
                xs, [p[1] for p in points], marker="o", markersize=3, color=color, label=role
            )
        ax.set_title(method)
        ax.set_xlabel("subsample size")
    axes[0][0].set_ylabel("estimate")
    axes[0][0].legend()
    return _save(fig, out_path)


def dist_panels(table, out_path):
    """Histograms of per-replication estimates, faceted by condition and method.

    The two models' distributions overlay in each panel; rows with a blank
    estimate (degenerate replications) are skipped.
    """
    table.require(("condition_id", "method", "model", "estimate"), "dist_panels")
    conditions = sorted({row["condition_id"] for row in table.rows})
    methods = _methods(table.rows)
    models = sorted({row["model"] for row in table.rows})
    colors = dict(zip(models, [c for _, c in _ROLE_COLORS] + ["tab:green", "tab:red"]))
    fig, axes = plt.subplots(
        len(conditions),
        len(methods),
        figsize=(2.9 * len(methods) + 0.8, 1.9 * len(conditions) + 0.5),
        squeeze=False,
    )
    for r, cid in enumerate(conditions):
        for c, method in enumerate(methods):
            ax = axes[r][c]
            sub = [
                row
                for row in table.rows
                if row["condition_id"] == cid and row["method"] == method
            ]
            values = {
                m: [
                    value
                    for row in sub
                    if row["model"] == m and (value := _num(row["estimate"])) is not None
                ]
                for m in models
            }
            pooled = [v for vs in values.values() for v in vs]
            if pooled:
                lo, hi = min(pooled), max(pooled)
                if lo == hi:
                    lo, hi = lo - 0.5, hi + 0.5
                bins = np.linspace(lo, hi, 31)
                for m in models:
                    if values[m]:
                        ax.hist(
                            values[m],
                            bins=bins,
                            alpha=0.6,
                            color=colors.get(m, "tab:gray"),
                            label=m,
                        )
            if r == 0:
                ax.set_title(method)
            if c == 0:
                ax.set_ylabel(cid, fontsize=6)
    for ax in axes[-1]:
        ax.set_xlabel("estimate")
    axes[0][0].legend()
    return _save(fig, out_path)
