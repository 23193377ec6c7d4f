"""Render determinism on freshly generated experiment outputs.

Generates reduced-replication grids through the producer CLI (the package
under test touches only the CSVs it writes), renders every panel type twice,
and requires byte-identical non-empty PNG files.
"""

import json
import subprocess
import sys

import pytest

from rsacompare_figures.cli import PANELS, main

EXPERIMENTS = ("sim_a", "sim_d", "fmri")
REPLICATIONS = 30


@pytest.fixture(scope="session")
def fresh_runs(tmp_path_factory):
    root = tmp_path_factory.mktemp("runs")
    for experiment in EXPERIMENTS:
        cfg_path = root / f"{experiment}.json"
        cfg_path.write_text(json.dumps({"experiment": experiment, "replications": REPLICATIONS}))
        proc = subprocess.run(
            [
                sys.executable,
                "-m",
                "rsacompare.harness",
                "simulate",
                "--config",
                str(cfg_path),
                "--out",
                str(root / experiment),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, f"{experiment} run failed: {proc.stderr}"
    return root


def test_criterion_10_all_panels_render_reproducibly(fresh_runs, tmp_path):
    rendered = {}
    for run in ("first", "second"):
        for experiment in EXPERIMENTS:
            out = tmp_path / run / experiment
            code = main(
                [
                    "--summary",
                    str(fresh_runs / experiment / "summary.csv"),
                    "--results",
                    str(fresh_runs / experiment / "results.csv"),
                    "--out",
                    str(out),
                    "--which",
                    "all",
                ]
            )
            assert code == 0, f"render failed for {experiment}"
            for which in PANELS:
                data = (out / f"{which}.png").read_bytes()
                assert data[:8] == b"\x89PNG\r\n\x1a\n", f"{experiment}/{which} is not a PNG"
                assert len(data) > 1000, f"{experiment}/{which} is implausibly small"
                rendered.setdefault((experiment, which), []).append(data)
    mismatched = [key for key, blobs in rendered.items() if blobs[0] != blobs[1]]
    assert not mismatched, f"bytes differ across identical runs for {mismatched}"
    print(f"criterion 10: PASS - {len(rendered)} panel files byte-identical across two renders")
