import math

import numpy as np
import pytest

from dnlslab.harness import guaranteed_window
from dnlslab.resonance import build_quad
from dnlslab.spectral import (
    SpectralField,
    SpectralNanError,
    _Workspace,
    apriori_bound,
    conserved_triple,
    evolve,
    interaction_coefficients,
    momentum_fourier_identity,
    suggested_dt,
    synthesize_field,
    weighted_h1_norm,
)
from dnlslab.toy import toy_invariants


def single_mode_field(xi=1, cutoff=8, grid=32, amplitude=1.0):
    coeffs = np.zeros(2 * cutoff + 1, dtype=complex)
    coeffs[cutoff + xi] = amplitude
    return SpectralField(cutoff, grid, coeffs)


@pytest.fixture(scope="module")
def quad_small():
    return build_quad(5, -4)


def test_field_validation():
    with pytest.raises(ValueError):
        SpectralField(8, 17, np.zeros(17, dtype=complex))  # not a power of two
    with pytest.raises(ValueError):
        SpectralField(8, 16, np.zeros(17, dtype=complex))  # grid < 2*cutoff+2
    with pytest.raises(ValueError):
        SpectralField(8, 32, np.zeros(5, dtype=complex))


def test_synthesize_places_cluster_modes(quad_small):
    field = synthesize_field(quad_small, 0.2, cutoff=32, grid_size=128)
    assert field.mass() == pytest.approx(1.5, rel=1e-15)
    nonzero = {int(xi) for xi in field.wavenumbers[np.abs(field.coefficients) > 0]}
    assert nonzero == set(quad_small.modes)
    amps = [field.coefficient(m) for m in quad_small.modes]
    assert toy_invariants(amps) == pytest.approx([1.0, 0.5, 0.0, 0.0], abs=1e-15)


def test_synthesize_rejects_bad_input(quad_small):
    with pytest.raises(ValueError):
        synthesize_field(quad_small, 0.0, cutoff=32)
    with pytest.raises(ValueError):
        synthesize_field(quad_small, 1.0, cutoff=32)
    with pytest.raises(ValueError):
        synthesize_field(quad_small, 0.2, cutoff=7)


def test_free_flow_is_exact():
    field = single_mode_field(xi=3)
    traj = evolve(field, 0.0, 0.0, 0.01, 100, sample_stride=100)
    expected = np.exp(-1j * 9.0)
    assert abs(traj.coefficients[-1][field.cutoff + 3] - expected) <= 1e-13


def test_single_mode_closed_form():
    field = single_mode_field()
    lam, mu = 20.0, 1.0
    traj = evolve(field, lam, mu, 1e-4, 10000, sample_stride=10000)
    got = traj.coefficients[-1][field.cutoff + 1]
    assert abs(got - np.exp(-1j * (1.0 - lam + mu))) <= 1e-8
    assert abs(abs(got) - 1.0) <= 1e-10


def test_convergence_is_fourth_order():
    field = single_mode_field()
    errs = []
    dts = (0.1, 0.05, 0.025)
    for dt in dts:
        steps = int(round(1.0 / dt))
        traj = evolve(field, 2.0, 1.0, dt, steps, sample_stride=steps)
        errs.append(abs(traj.coefficients[-1][field.cutoff + 1] - 1.0))
    slope = np.polyfit(np.log(dts), np.log(errs), 1)[0]
    assert slope == pytest.approx(4.0, abs=0.2)


def test_conserved_triple_single_mode():
    lam, mu = 20.0, 1.0
    cons = conserved_triple(single_mode_field(), lam, mu)
    assert cons.mass == pytest.approx(1.0, rel=1e-13)
    assert cons.momentum == pytest.approx(-0.5 - lam / 4, rel=1e-13)
    assert cons.energy == pytest.approx(0.5 + lam / 4 + (lam**2 + 2 * mu) / 12,
                                        rel=1e-13)


def test_conserved_triple_zero_field():
    field = SpectralField(8, 32, np.zeros(17, dtype=complex))
    cons = conserved_triple(field, 20.0, 1.0)
    assert cons.mass == cons.energy == cons.momentum == 0.0


def test_functionals_are_real():
    quad = build_quad(5, -4)
    field = synthesize_field(quad, 0.3, (0.2, -0.4, 0.9, 0.1), cutoff=32,
                             grid_size=128)
    ws = _Workspace(field.cutoff, field.grid_size)
    u, ux = ws.physical(field.coefficients)
    lam, mu = 20.0, 1.0
    raw = {
        "mass": np.mean(u * np.conj(u)),
        "energy": np.mean(
            0.5 * ux * np.conj(ux)
            + (lam / 4) * u * np.conj(u) * np.imag(np.conj(u) * ux)
            + ((lam**2 + 2 * mu) / 12) * (u * np.conj(u)) ** 3
        ),
        "momentum": np.mean(
            -0.5 * np.imag(np.conj(u) * ux) - (lam / 4) * (u * np.conj(u)) ** 2
        ),
    }
    cons = conserved_triple(field, lam, mu)
    for name, value in raw.items():
        assert abs(value.imag) <= 1e-12
        assert getattr(cons, name) == pytest.approx(value.real, rel=1e-12)


def test_dealiasing_padding_three_matches_four(quad_small):
    field = synthesize_field(quad_small, 0.3, cutoff=32, grid_size=128)
    t3 = evolve(field, 20.0, 1.0, 1e-4, 200, sample_stride=200, padding=3)
    t4 = evolve(field, 20.0, 1.0, 1e-4, 200, sample_stride=200, padding=4)
    assert np.max(np.abs(t3.coefficients[-1] - t4.coefficients[-1])) <= 1e-12


def test_interaction_coefficients_free_flow():
    field = single_mode_field(xi=3)
    traj = evolve(field, 0.0, 0.0, 0.01, 50, sample_stride=10)
    for i in range(len(traj)):
        a = interaction_coefficients(traj.field_at(i))
        assert abs(a[field.cutoff + 3] - 1.0) <= 1e-13


def test_interaction_coefficients_rotation_rate():
    field = single_mode_field()
    lam, mu = 20.0, 1.0
    traj = evolve(field, lam, mu, 1e-4, 10000, sample_stride=10000)
    a = interaction_coefficients(traj.field_at(1))
    assert abs(a[field.cutoff + 1] - np.exp(1j * (lam - mu))) <= 1e-8


def test_interaction_coefficients_identity_at_t0(quad_small):
    field = synthesize_field(quad_small, 0.3, cutoff=32, grid_size=128)
    assert np.array_equal(interaction_coefficients(field), field.coefficients)


def test_momentum_identity(quad_small):
    zero = SpectralField(8, 32, np.zeros(17, dtype=complex))
    assert momentum_fourier_identity(zero, 20.0, 0.0) == pytest.approx(0.0, abs=1e-15)

    field = synthesize_field(quad_small, 0.3, cutoff=64, grid_size=256)
    lam, mu = 20.0, 1.0
    p0 = conserved_triple(field, lam, mu).momentum
    assert momentum_fourier_identity(field, lam, p0) <= 1e-12

    window = guaranteed_window(lam, mu, quad_small.m_star)
    dt = suggested_dt(field, lam, mu) / 4
    traj = evolve(field, lam, mu, dt, int(math.ceil(window / dt)))
    residuals = [
        momentum_fourier_identity(traj.field_at(i), lam, p0) for i in range(len(traj))
    ]
    assert max(residuals) <= 1e-6


def test_apriori_ratio(quad_small):
    zero = SpectralField(8, 32, np.zeros(17, dtype=complex))
    assert weighted_h1_norm(zero) == 0.0

    k0 = 0.2
    field = synthesize_field(quad_small, k0, cutoff=32, grid_size=128)
    intensities = [k0, k0 / 2, 1 - k0, (1 - k0) / 2]
    expected = math.sqrt(
        sum((1 + m**2) * i for m, i in zip(quad_small.modes, intensities))
    )
    assert weighted_h1_norm(field) == pytest.approx(expected, rel=1e-13)

    window = guaranteed_window(20.0, 1.0, quad_small.m_star)
    dt = suggested_dt(field, 20.0, 1.0) / 2
    traj = evolve(field, 20.0, 1.0, dt, int(math.ceil(window / dt)))
    ratio = apriori_bound(traj, quad_small.m_star)
    assert ratio <= 2.0 * expected / quad_small.m_star


def test_energy_positive_in_defocusing_regime(quad_small):
    lam = 20.0
    for mu in (1.0, -lam**2 / 16 + 1.0):
        field = synthesize_field(quad_small, 0.3, cutoff=32, grid_size=128)
        assert conserved_triple(field, lam, mu).energy >= 0.0


def test_nan_abort_reports_last_step(quad_small):
    field = synthesize_field(quad_small, 0.3, cutoff=32, grid_size=128)
    with np.errstate(all="ignore"):
        with pytest.raises(SpectralNanError) as info:
            evolve(field, 2000.0, 0.0, 0.5, 200)
    assert info.value.last_healthy_step >= 0


def test_evolve_rejects_bad_steps(quad_small):
    field = synthesize_field(quad_small, 0.3, cutoff=32, grid_size=128)
    with pytest.raises(ValueError):
        evolve(field, 1.0, 1.0, -0.1, 10)
