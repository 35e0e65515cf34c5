import json
import math

import numpy as np
import pytest

from dnlslab.harness import (
    PDE_COLUMNS,
    REDUCED_COLUMNS,
    TOY_COLUMNS,
    RunConfig,
    emit_series,
    reduced_rows,
    residual_norms,
    run_exchange_experiment,
    scaled_coupling,
    scaling_equivalence_check,
    guaranteed_window,
    toy_rows,
)
from dnlslab.reduced import CONSISTENT, ReducedState, integrate_reduced
from dnlslab.resonance import build_quad
from dnlslab.spectral import SpectralField, synthesize_field
from dnlslab.toy import ToyParams, canonical_amplitudes, integrate_toy

CHEAP = dict(m=5, n=-4, cutoff=64, grid_size=256)


@pytest.fixture(scope="module")
def quad_big():
    return build_quad(101, -100)


def off_cluster_field(quad, xi0, amplitude, cutoff=341):
    coeffs = np.zeros(2 * cutoff + 1, dtype=complex)
    coeffs[cutoff + xi0] = amplitude
    return SpectralField(cutoff, 1024, coeffs)


def test_residual_norms_vanish_on_cluster(quad_big):
    field = synthesize_field(quad_big, 0.2, cutoff=341, grid_size=1024)
    norms = residual_norms(field, quad_big, 0.5)
    assert norms.a_low == norms.a_high == norms.weighted == 0.0


def test_residual_norms_high_mode(quad_big):
    norms = residual_norms(off_cluster_field(quad_big, 300, 1e-3), quad_big, 0.5)
    assert norms.a_low == 0.0
    assert norms.a_high == pytest.approx((1 + 300**2) ** 0.25 * 1e-3, rel=1e-12)
    assert norms.weighted == norms.a_high


def test_residual_norms_low_mode(quad_big):
    norms = residual_norms(off_cluster_field(quad_big, 2, 1e-3), quad_big, 0.5)
    assert norms.low_cutoff == 4
    assert norms.a_high == 0.0
    assert norms.weighted == pytest.approx(math.sqrt(101) * 1e-3, rel=1e-12)


def test_residual_norms_delta_validation(quad_big):
    field = synthesize_field(quad_big, 0.2, cutoff=341, grid_size=1024)
    for delta in (0.4, 1.0):
        with pytest.raises(ValueError):
            residual_norms(field, quad_big, delta)


def test_residual_norms_monotone_under_domination(quad_big):
    rng = np.random.default_rng(9)
    cutoff = 341
    base = rng.uniform(0.0, 1e-3, size=2 * cutoff + 1)
    bigger = base + rng.uniform(0.0, 1e-3, size=base.size)
    fields = [
        SpectralField(cutoff, 1024, mags.astype(complex)) for mags in (base, bigger)
    ]
    small = residual_norms(fields[0], quad_big, 0.5)
    large = residual_norms(fields[1], quad_big, 0.5)
    assert large.a_low >= small.a_low
    assert large.a_high >= small.a_high
    assert large.weighted >= small.weighted


def test_guaranteed_window():
    assert guaranteed_window(20.0, 1.0, 101) == pytest.approx(
        0.1 * min(1 / 2020, 1 / 401), rel=1e-15
    )


def test_emit_series_schemas(tmp_path):
    t = np.linspace(0.0, 0.5, 9)
    red = integrate_reduced(ReducedState(0.0, 0.3), 1.0, CONSISTENT, t_samples=t,
                            horizon=0.5)
    emit_series("reduced", reduced_rows(red), REDUCED_COLUMNS,
                tmp_path / "r.csv", {"k": 1})
    header = (tmp_path / "r.csv").read_text().splitlines()[0]
    assert header.split(",") == REDUCED_COLUMNS
    sidecar = json.loads((tmp_path / "r.csv.json").read_text())
    assert sidecar["config"] == {"k": 1}

    quad = build_quad(5, -4)
    toy_traj = integrate_toy(
        canonical_amplitudes(0.3), ToyParams(quad, 1.0, flavor="gauged", p0=0.0),
        horizon=0.5, t_samples=t,
    )
    emit_series("toy", toy_rows(toy_traj), TOY_COLUMNS, tmp_path / "t.csv", {})
    assert (tmp_path / "t.csv").read_text().splitlines()[0].split(",") == TOY_COLUMNS


def test_emit_series_deterministic(tmp_path):
    t = np.linspace(0.0, 0.5, 9)
    red = integrate_reduced(ReducedState(0.0, 0.3), 1.0, CONSISTENT, t_samples=t,
                            horizon=0.5)
    rows = list(reduced_rows(red))
    emit_series("reduced", rows, REDUCED_COLUMNS, tmp_path / "a.csv", {})
    emit_series("reduced", rows, REDUCED_COLUMNS, tmp_path / "b.csv", {})
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_emit_series_io_error(tmp_path):
    with pytest.raises(OSError, match="missing"):
        emit_series("reduced", [], REDUCED_COLUMNS,
                    tmp_path / "missing" / "x.csv", {})


def test_scaled_coupling_examples():
    s, mu_prime = scaled_coupling(10.0, 101, -100, 1.0)
    assert s == pytest.approx(math.sqrt(2.0), rel=1e-15)
    assert mu_prime == pytest.approx(0.25, rel=1e-15)
    s, mu_prime = scaled_coupling(40.0, 101, -100, 1.0)
    assert mu_prime == pytest.approx(4.0, rel=1e-15)
    with pytest.raises(ValueError):
        scaled_coupling(-10.0, 101, -100, 1.0)


def test_scaling_identity_and_equivalence():
    config = RunConfig(**CHEAP)
    identity = scaling_equivalence_check(config, 20.0)
    assert identity["sup_difference"] == 0.0
    scaled = scaling_equivalence_check(config, 40.0)
    assert scaled["mu_prime"] == pytest.approx(4.0 * config.mu)
    assert scaled["sup_difference"] <= 1e-6
    # the printed transformation in the source would not reproduce the flow
    assert scaled["mu_prime_reciprocal"] == pytest.approx(config.mu / 4.0)


def test_regime_report():
    config = RunConfig(m=101, n=-100, mu=1.0)
    regime = config.regime_report()
    assert regime["m_star_over_lambda"] == pytest.approx(101 / 20)
    assert regime["weak_coupling"] is True


@pytest.fixture(scope="module")
def cheap_report(tmp_path_factory):
    out = tmp_path_factory.mktemp("exchange")
    config = RunConfig(k0=0.25, **CHEAP)
    return run_exchange_experiment(config, out_dir=out), out


def test_exchange_experiment_levels(cheap_report):
    report, _ = cheap_report
    for name, level in report["levels"].items():
        assert level.ok, f"{name} failed: {level.error}"
    assert report["exchange_defect"] <= 1e-8
    assert report["toy_vs_reduced_sup"] <= 1e-8
    assert report["c_star"] == pytest.approx(0.25, abs=1e-9)
    assert report["levels"]["pde"].data["residual_t0"] == 0.0
    assert report["levels"]["pde"].data["toy_tracking_sup"] <= 1e-2


def test_exchange_experiment_outputs(cheap_report):
    report, out = cheap_report
    names = {p.name for p in out.glob("*.csv")}
    assert names == {"reduced.csv", "toy_gauged.csv", "toy_full.csv", "pde.csv"}
    header = (out / "pde.csv").read_text().splitlines()[0]
    assert header.split(",") == PDE_COLUMNS


def test_exchange_experiment_deterministic(tmp_path):
    config = RunConfig(k0=0.25, **CHEAP)
    a = tmp_path / "a"
    b = tmp_path / "b"
    run_exchange_experiment(config, out_dir=a)
    run_exchange_experiment(config, out_dir=b)
    for name in ("reduced.csv", "toy_gauged.csv", "toy_full.csv", "pde.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
