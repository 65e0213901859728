"""Generate real simulator tables once per session through the public CLI."""

from __future__ import annotations

import shutil
import subprocess
import sys

import pytest

FAST = ["--set", "n_points=2048", "--set", "n_kicks=8"]
WINDOW = ["--set", "t_max=8", "--set", "fit_start=3", "--set", "fit_stop=8"]


def run_cli(kind: str, out_dir, *extra: str) -> None:
    result = subprocess.run(
        [sys.executable, "-m", "ptrotor.cli", kind, "--out", str(out_dir), *extra],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0, f"{kind} failed: {result.stderr}"


@pytest.fixture(scope="session")
def tables_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("tables")
    run_cli("otoc", out, *FAST, *WINDOW)
    for label, lam in (("lam01", "0.1"), ("lam2", "2.0")):
        side = tmp_path_factory.mktemp(f"otoc_{label}")
        run_cli("otoc", side, *FAST, *WINDOW, "--set", f"lambda={lam}")
        shutil.copy(side / "otoc_series.csv", out / f"otoc_series_{label}.csv")
    run_cli("reverse-check", out, *FAST)
    run_cli(
        "scan-k",
        out,
        *FAST,
        *WINDOW,
        "--set",
        "k_values=5.5,6.283185307179586,7.0",
    )
    run_cli("classical", out, "--set", "k=8.0", "--set", "n_steps=8")
    return out
