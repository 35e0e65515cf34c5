"""Figure regeneration from the verify run's CSVs through the plots package."""

import shutil
import subprocess
from pathlib import Path

import pytest

PLOTS = Path(__file__).resolve().parents[1] / "plots"
RENDERER = PLOTS / "dist" / "render.js"

pytestmark = pytest.mark.skipif(
    shutil.which("node") is None or not RENDERER.exists(),
    reason="node or built plots package unavailable",
)


def render(kind, inputs, out):
    cmd = ["node", str(RENDERER), "--kind", kind, "--in",
           *[str(p) for p in inputs], "--out", str(out)]
    return subprocess.run(cmd, capture_output=True, text=True)


@pytest.mark.parametrize(
    "kind, sources",
    [
        ("exchange", ["compare/reduced.csv", "compare/toy_gauged.csv",
                      "compare/pde.csv"]),
        ("phase-portrait", ["compare/reduced.csv"]),
        ("drift", ["compare/pde.csv"]),
        ("residual-scaling", ["scaling/pde_m101.csv", "scaling/pde_m201.csv"]),
    ],
)
def test_figures_regenerate_deterministically(acceptance_run, tmp_path, kind, sources):
    _, verify_dir = acceptance_run
    inputs = [verify_dir / src for src in sources]
    for path in inputs:
        assert path.exists(), f"verify output {path} missing"
    first = tmp_path / "first.svg"
    second = tmp_path / "second.svg"
    for out in (first, second):
        proc = render(kind, inputs, out)
        assert proc.returncode == 0, proc.stderr
    assert first.read_bytes() == second.read_bytes()
    assert b"</svg>" in first.read_bytes()


def test_schema_mismatch_names_missing_column(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("t,phi1,K,H\n0,0,0.2,1\n")
    proc = render("phase-portrait", [bad], tmp_path / "fig.svg")
    assert proc.returncode == 1
    assert "missing column het_residual" in proc.stderr
