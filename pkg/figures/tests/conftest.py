"""Contract-shaped CSV builders shared by the figure tests.

The column lists mirror the producer's output schema on purpose: these tests
guard the consumer side of that contract.
"""

import pytest

SUMMARY_COLUMNS = [
    "experiment",
    "condition_id",
    "n",
    "noise_var",
    "p",
    "rho_rel",
    "rho_irrel",
    "method",
    "mean_large",
    "sd_large",
    "mean_small",
    "sd_small",
    "interval_lo_large",
    "interval_hi_large",
    "interval_lo_small",
    "interval_hi_small",
    "cohens_d",
    "accuracy",
    "n_effective",
]

RESULTS_COLUMNS = [
    "experiment",
    "condition_id",
    "n",
    "noise_var",
    "p",
    "rho_rel",
    "rho_irrel",
    "replication",
    "method",
    "model",
    "estimate",
    "status",
]

_SUMMARY_DEFAULTS = {
    "experiment": "sim_a",
    "condition_id": "sim_a-n0100",
    "n": "100",
    "noise_var": "5",
    "p": "20",
    "rho_rel": "0.2",
    "rho_irrel": "0.2",
    "method": "ols",
    "mean_large": "0.58",
    "sd_large": "0.03",
    "mean_small": "0.47",
    "sd_small": "0.03",
    "interval_lo_large": "0.52",
    "interval_hi_large": "0.64",
    "interval_lo_small": "0.41",
    "interval_hi_small": "0.53",
    "cohens_d": "3.5",
    "accuracy": "0.95",
    "n_effective": "1000",
}

_RESULTS_DEFAULTS = {
    "experiment": "sim_a",
    "condition_id": "sim_a-n0100",
    "n": "100",
    "noise_var": "5",
    "p": "20",
    "rho_rel": "0.2",
    "rho_irrel": "0.2",
    "replication": "1",
    "method": "ols",
    "model": "large",
    "estimate": "0.55",
    "status": "ok",
}


def summary_row(**overrides) -> str:
    merged = {**_SUMMARY_DEFAULTS, **{k: str(v) for k, v in overrides.items()}}
    return ",".join(merged[c] for c in SUMMARY_COLUMNS)


def results_row(**overrides) -> str:
    merged = {**_RESULTS_DEFAULTS, **{k: str(v) for k, v in overrides.items()}}
    return ",".join(merged[c] for c in RESULTS_COLUMNS)


def summary_grid(methods=("ols", "rsa"), n_values=(100, 200, 300), **overrides) -> list:
    rows = []
    for method in methods:
        for i, n in enumerate(n_values):
            rows.append(
                summary_row(
                    condition_id=f"sim_a-n{n:04d}",
                    n=n,
                    method=method,
                    accuracy=f"{0.6 + 0.05 * i:.2f}",
                    cohens_d=f"{1.0 + 0.5 * i:.2f}",
                    **overrides,
                )
            )
    return rows


def png_size(path) -> tuple:
    data = path.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n", "not a PNG file"
    return int.from_bytes(data[16:20], "big"), int.from_bytes(data[20:24], "big")


@pytest.fixture
def write_csv(tmp_path):
    def _write(name, columns, rows):
        path = tmp_path / name
        path.write_text("\n".join([",".join(columns)] + rows) + "\n")
        return path

    return _write
