"""Fixed rendering style so identical inputs give identical output bytes."""

STYLE = {
    "figure.dpi": 150,
    "savefig.dpi": 150,
    "figure.constrained_layout.use": True,
    "font.size": 9,
    "axes.titlesize": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.grid": True,
    "grid.linewidth": 0.4,
    "grid.alpha": 0.35,
    "lines.linewidth": 1.3,
}

# fixed colors for the known methods keep a method's color stable across
# figures even when files carry different method subsets
_METHOD_COLORS = {
    "rsa": "tab:blue",
    "pca_rsa": "tab:orange",
    "fr_rsa": "tab:green",
    "ols": "tab:red",
    "lmm": "tab:purple",
}
_PALETTE = (
    "tab:blue",
    "tab:orange",
    "tab:green",
    "tab:red",
    "tab:purple",
    "tab:brown",
    "tab:pink",
    "tab:gray",
)


def color_map(names) -> dict:
    """Stable name-to-color assignment, independent of row order."""
    out = {name: _METHOD_COLORS[name] for name in names if name in _METHOD_COLORS}
    spare = [c for c in _PALETTE if c not in set(out.values())] or list(_PALETTE)
    k = 0
    for name in sorted(names):
        if name not in out:
            out[name] = spare[k % len(spare)]
            k += 1
    return out
