import json

from dnlslab.cli import main, read_checkpoint


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_resonance_json(capsys):
    code, out = run(capsys, "resonance", "--m", "101", "--n", "-100")
    assert code == 0
    payload = json.loads(out)
    assert payload["alpha2"] == -203
    assert payload["nondegenerate"] is True
    assert payload["raw_gap"] == 2010
    assert payload["gauge_gap"] == 0.0


def test_resonance_rejects_balanced_pair(capsys):
    code, _ = run(capsys, "resonance", "--m", "1", "--n", "-1")
    assert code == 1


def test_resonance_scan_flag(capsys):
    code, out = run(capsys, "resonance", "--m", "101", "--n", "-100",
                    "--scan-sextuples")
    assert code == 0
    assert json.loads(out)["dichotomy_violations"] == []


def test_unknown_subcommand(capsys):
    assert main(["nonsense"]) == 1


def test_reduced_period_and_csv(tmp_path, capsys):
    code, out = run(
        capsys, "reduced", "--mu", "1", "--k0", "0.25", "--find-period",
        "--out", str(tmp_path),
    )
    assert code == 0
    report = json.loads(out)
    assert report["classification"] == "periodic"
    assert report["exchange_defect"] <= 1e-8
    lines = (tmp_path / "reduced.csv").read_text().splitlines()
    assert lines[0] == "t,phi1,K,H,het_residual"
    assert (tmp_path / "manifest.json").exists()


def test_toy_csv(tmp_path, capsys):
    code, _ = run(
        capsys, "toy", "--m", "5", "--n", "-4", "--k0", "0.3",
        "--flavor", "gauged", "--horizon", "0.5", "--n-samples", "17",
        "--out", str(tmp_path),
    )
    assert code == 0
    lines = (tmp_path / "toy_gauged.csv").read_text().splitlines()
    assert lines[0].startswith("t,re_a1,im_a1")
    assert len(lines) == 18


def test_pde_csv_and_checkpoint(tmp_path, capsys):
    code, _ = run(
        capsys, "pde", "--m", "5", "--n", "-4", "--grid", "256",
        "--cutoff", "64", "--steps", "3", "--out", str(tmp_path),
    )
    assert code == 0
    lines = (tmp_path / "pde.csv").read_text().splitlines()
    assert lines[0] == "t,M,E,P,I_alpha1,I_alpha2,I_beta1,I_beta2,A_L,A_H,apriori_ratio"
    assert len(lines) == 5
    field, sidecar = read_checkpoint(tmp_path / "checkpoint")
    assert sidecar["quad"] == {"M": 5, "N": -4}
    assert field.coefficients.size == 129
    assert abs(field.mass() - 1.5) <= 1e-6


def test_manifest_round_trip(tmp_path, capsys):
    first = tmp_path / "first"
    code, _ = run(
        capsys, "reduced", "--mu", "1", "--k0", "0.3", "--horizon", "1.0",
        "--n-samples", "33", "--out", str(first),
    )
    assert code == 0
    second = tmp_path / "second"
    code, _ = run(
        capsys, "reduced", "--config", str(first / "manifest.json"),
        "--out", str(second),
    )
    assert code == 0
    assert (first / "reduced.csv").read_bytes() == (second / "reduced.csv").read_bytes()


def test_config_rejects_unknown_keys(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    code, _ = run(capsys, "reduced", "--config", str(cfg))
    assert code == 1


def test_compare_cheap(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"cutoff": 64, "grid_size": 256, "k0": 0.25}))
    code, out = run(
        capsys, "compare", "--m", "5", "--n", "-4", "--config", str(cfg),
        "--out", str(tmp_path / "out"),
    )
    assert code == 0
    report = json.loads(out)
    assert report["exchange_defect"] <= 1e-8
    assert set(report["levels"]) >= {"reduced-consistent", "toy-gauged", "pde"}
    names = {p.name for p in (tmp_path / "out").glob("*.csv")}
    assert "pde.csv" in names
