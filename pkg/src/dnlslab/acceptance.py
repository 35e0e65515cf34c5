"""Acceptance suite: one callable per criterion, shared by `verify` and tests.

Each criterion reports PASS/FAIL at its pinned tolerance together with the
measured quantities.  Criterion 5b is expected to fail from the default
initial condition (0, 0.2): that point lies outside the separatrix of the
planar flow (heteroclinic residual -0.0405 < 0), so its orbit never crosses
K = 1/2 and K(0) + K(T) = 1 is unattainable there; the exchange symmetry is
verified from interior starts by the companion unit tests.
"""

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import harness, reduced, spectral, toy
from .resonance import (
    build_quad,
    check_nondegeneracy,
    cluster_identity_scan,
    dichotomy_scan,
)

DEFAULT_MU = 1.0
DEFAULT_K0 = 0.2
ODE_TOL = 1e-12


@dataclass
class CriterionResult:
    cid: str
    description: str
    passed: bool
    measured: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        details = ", ".join(f"{k}={v:.3e}" if isinstance(v, float) else f"{k}={v}"
                            for k, v in self.measured.items())
        return f"{status} [{self.cid}] {self.description} ({details})"


class _Shared:
    """Memoised heavy artifacts reused across criteria."""

    def __init__(self):
        self._cache = {}

    def quad(self, m=101, n=-100):
        return build_quad(m, n)

    def period_default(self):
        """Period result of the consistent flow from (0, DEFAULT_K0)."""
        key = "period"
        if key not in self._cache:
            self._cache[key] = reduced.find_period(
                reduced.ReducedState(0.0, DEFAULT_K0), DEFAULT_MU,
                reduced.CONSISTENT, ode_tol=ODE_TOL,
            )
        return self._cache[key]

    def toy_pair(self, lam_offset=0.0):
        """(gauged, full) trajectories over one full period, quad(101,-100)."""
        key = ("toy", lam_offset)
        if key not in self._cache:
            quad = self.quad()
            horizon = self.period_default().full_period
            fld = spectral.synthesize_field(quad, DEFAULT_K0, cutoff=341,
                                            grid_size=1024)
            p0 = spectral.conserved_triple(fld, quad.lam, DEFAULT_MU).momentum
            amps0 = toy.canonical_amplitudes(DEFAULT_K0)
            t_samples = np.linspace(0.0, horizon, 257)
            gauged = toy.integrate_toy(
                amps0, toy.ToyParams(quad, DEFAULT_MU, flavor="gauged", p0=p0),
                horizon=horizon, tol=ODE_TOL, t_samples=t_samples,
            )
            full = toy.integrate_toy(
                amps0,
                toy.ToyParams(quad, DEFAULT_MU, lam=quad.lam + lam_offset,
                              flavor="full", p0=p0),
                horizon=horizon, tol=ODE_TOL, t_samples=t_samples,
            )
            self._cache[key] = (gauged, full)
        return self._cache[key]

    def pde_window(self, m, n, cutoff, grid):
        key = ("pde", m, n, cutoff, grid)
        if key not in self._cache:
            quad = self.quad(m, n)
            fld = spectral.synthesize_field(quad, DEFAULT_K0, cutoff=cutoff,
                                            grid_size=grid)
            p0 = spectral.conserved_triple(fld, quad.lam, DEFAULT_MU).momentum
            window = harness.guaranteed_window(quad.lam, DEFAULT_MU, quad.m_star)
            dt = spectral.suggested_dt(fld, quad.lam, DEFAULT_MU)
            steps = int(math.ceil(window / dt))
            traj = spectral.evolve(fld, quad.lam, DEFAULT_MU, dt, steps)
            self._cache[key] = (quad, traj, p0, window)
        return self._cache[key]


def criterion_1(shared) -> CriterionResult:
    count = cluster_identity_scan(1000)
    quad = build_quad(5, -4)
    ok = (
        quad.modes == (5, -11, -4, 7)
        and quad.lam == 20.0
        and quad.m_star == 5
        and quad.raw_gap == 90
    )
    return CriterionResult(
        "1", "cluster identities and gap laws, exhaustive |M|,|N| <= 1000",
        ok, {"pairs_checked": count},
    )


def criterion_2(shared) -> CriterionResult:
    ok_small = check_nondegeneracy(build_quad(5, -4)).ok
    ok_big = check_nondegeneracy(build_quad(101, -100)).ok
    bad = check_nondegeneracy(build_quad(1, 0))
    collision = any(
        sorted(map(sorted, v)) == [[-1, 1], [0, 0]] for v in bad.violations
    )
    ok = ok_small and ok_big and not bad.ok and collision
    return CriterionResult(
        "2", "pair-sum nondegeneracy brute force",
        ok, {"violations_1_0": len(bad.violations)},
    )


def criterion_3(shared) -> CriterionResult:
    violations = dichotomy_scan(shared.quad())
    return CriterionResult(
        "3", "five-in-cluster dichotomy over all 4^5 sextuples",
        len(violations) == 0, {"violations": len(violations)},
    )


def criterion_4(shared) -> CriterionResult:
    period = shared.period_default()
    traj = reduced.integrate_reduced(
        reduced.ReducedState(0.0, DEFAULT_K0), DEFAULT_MU, reduced.CONSISTENT,
        horizon=period.full_period, tol=ODE_TOL, n_samples=2049,
    )
    h = traj.hamiltonian_series()
    drift = float(np.max(np.abs(h - h[0])) / abs(h[0]))
    saddle_err = max(
        abs(reduced.hamiltonian(math.pi, 0.5, DEFAULT_MU) - 45.0 * DEFAULT_MU / 16.0),
        abs(reduced.hamiltonian(-math.pi, 0.5, DEFAULT_MU) - 45.0 * DEFAULT_MU / 16.0),
    )
    res_err = max(
        abs(reduced.heteroclinic_residual(math.pi, 0.5)),
        abs(reduced.heteroclinic_residual(-math.pi, 0.5)),
    )
    ok = drift <= 1e-9 and saddle_err <= 1e-13 and res_err <= 1e-13
    return CriterionResult(
        "4", "consistent flow conserves H; saddle energy and residual exact",
        ok, {"H_drift": drift, "saddle_err": saddle_err, "residual_err": res_err},
    )


def criterion_5a(shared) -> CriterionResult:
    period = shared.period_default()
    ok = period.classification == "periodic"
    mu_t = {}
    for mu in (0.5, 1.0, 2.0):
        pr = reduced.find_period(
            reduced.ReducedState(0.0, DEFAULT_K0), mu, reduced.CONSISTENT,
            ode_tol=ODE_TOL,
        )
        ok = ok and pr.classification == "periodic"
        mu_t[mu] = mu * pr.half_period
    values = list(mu_t.values())
    spread = (max(values) - min(values)) / abs(values[0])
    ok = ok and spread <= 1e-6
    return CriterionResult(
        "5a", "period detected from (0, 0.2); mu*T invariant across mu",
        ok, {"muT": values[1], "relative_spread": spread},
    )


def criterion_5b(shared) -> CriterionResult:
    period = shared.period_default()
    defect = abs(period.k0 + period.kt - 1.0)
    return CriterionResult(
        "5b", "exchange symmetry K(0)+K(T)=1 from (0, 0.2)",
        defect <= 1e-6, {"defect": defect, "K0": period.k0, "KT": period.kt},
    )


def criterion_6(shared) -> CriterionResult:
    gauged, full = shared.toy_pair()
    drifts = []
    for traj in (gauged, full):
        inv = traj.invariants()
        scale = np.maximum(np.abs(inv[0]), 1.0)
        drifts.append(float(np.max(np.abs(inv - inv[0:1]) / scale)))
    ok = max(drifts) <= 1e-9
    return CriterionResult(
        "6", "four conserved combinations drift, both flavors, over [0, 2T]",
        ok, {"gauged_drift": drifts[0], "full_drift": drifts[1]},
    )


def criterion_7(shared) -> CriterionResult:
    gauged, full = shared.toy_pair()
    agree = float(np.max(np.abs(np.abs(full.amps) - np.abs(gauged.amps))))
    _, full_bad = shared.toy_pair(lam_offset=20.0)
    diverge = float(np.max(np.abs(np.abs(full_bad.amps) - np.abs(gauged.amps))))
    ok = agree <= 1e-8 and diverge > 1e-3
    return CriterionResult(
        "7", "gauge equivalence exact at lambda=20(M+N), broken at +20",
        ok, {"resonant_sup": agree, "perturbed_sup": diverge},
    )


def criterion_8(shared) -> CriterionResult:
    gauged, _ = shared.toy_pair()
    tr_red = reduced.integrate_reduced(
        reduced.ReducedState(0.0, DEFAULT_K0), DEFAULT_MU, reduced.CONSISTENT,
        horizon=float(gauged.t[-1]), tol=ODE_TOL, t_samples=gauged.t,
    )
    sup = float(np.max(np.abs(gauged.k - tr_red.k)))
    return CriterionResult(
        "8", "toy intensity |d_a1|^2 matches the consistent planar K(t)",
        sup <= 1e-8, {"sup_difference": sup},
    )


def criterion_9(shared) -> CriterionResult:
    # single-mode closed form
    cut, grid = 8, 32
    coeffs = np.zeros(2 * cut + 1, dtype=complex)
    coeffs[cut + 1] = 1.0
    fld = spectral.SpectralField(cut, grid, coeffs)
    lam, mu = 20.0, 1.0
    traj = spectral.evolve(fld, lam, mu, 1e-4, 10000, sample_stride=10000)
    phase_err = abs(
        traj.coefficients[-1][cut + 1] - np.exp(-1j * (1.0 - lam + mu))
    )

    # convergence order on the same problem with an O(1) rotation rate
    errs = []
    dts = (0.1, 0.05, 0.025, 0.0125)
    for dt in dts:
        steps = int(round(1.0 / dt))
        tr = spectral.evolve(fld, 2.0, 1.0, dt, steps, sample_stride=steps)
        errs.append(abs(tr.coefficients[-1][cut + 1] - 1.0))
    slope = float(np.polyfit(np.log(dts), np.log(errs), 1)[0])

    # conservation over the guaranteed window, first nonlinear generation
    # fully resolved (cutoff >= 5 * max cluster mode) and dt at a quarter of
    # the stability heuristic; the default display grid is truncation-limited
    # near 1e-4 and is reported by the harness CSVs instead
    quad = shared.quad()
    fld0 = spectral.synthesize_field(quad, DEFAULT_K0, cutoff=1365,
                                     grid_size=4096)
    p0 = spectral.conserved_triple(fld0, quad.lam, DEFAULT_MU).momentum
    window = harness.guaranteed_window(quad.lam, DEFAULT_MU, quad.m_star)
    dt = spectral.suggested_dt(fld0, quad.lam, DEFAULT_MU) / 4.0
    steps = int(math.ceil(window / dt))
    tr = spectral.evolve(fld0, quad.lam, DEFAULT_MU, dt, steps)
    cons = [spectral.conserved_triple(tr.field_at(i), quad.lam, DEFAULT_MU)
            for i in range(len(tr))]
    drift = max(
        max(abs(c.mass - cons[0].mass) / abs(cons[0].mass) for c in cons),
        max(abs(c.energy - cons[0].energy) / abs(cons[0].energy) for c in cons),
        max(abs(c.momentum - cons[0].momentum) / abs(cons[0].momentum) for c in cons),
    )
    mom_res = max(
        spectral.momentum_fourier_identity(tr.field_at(i), quad.lam, p0)
        for i in range(len(tr))
    )
    ok = (
        phase_err <= 1e-8
        and abs(slope - 4.0) <= 0.2
        and drift <= 1e-6
        and mom_res <= 1e-6
    )
    return CriterionResult(
        "9", "PDE correctness: closed form, order, conservation, momentum",
        ok, {"phase_err": phase_err, "slope": slope, "max_drift": drift,
             "momentum_residual": mom_res},
    )


def criterion_10(shared) -> CriterionResult:
    runs = {}
    for (m, n, cutoff, grid) in ((101, -100, 341, 1024), (201, -200, 682, 2048)):
        quad, traj, p0, window = shared.pde_window(m, n, cutoff, grid)
        weighted = [
            harness.residual_norms(traj.field_at(i), quad, 0.5).weighted
            for i in range(len(traj))
        ]
        tr_toy = toy.integrate_toy(
            toy.canonical_amplitudes(DEFAULT_K0),
            toy.ToyParams(quad, DEFAULT_MU, flavor="full", p0=p0),
            horizon=float(traj.times[-1]), tol=ODE_TOL, t_samples=traj.times,
        )
        sup = 0.0
        for j, mode in enumerate(quad.modes):
            pde_i = np.abs(traj.coefficients[:, traj.cutoff + mode]) ** 2
            toy_i = np.abs(tr_toy.amps[:, j]) ** 2
            sup = max(sup, float(np.max(np.abs(pde_i - toy_i))))
        runs[quad.m_star] = {
            "tracking_sup": sup,
            "max_weighted": max(weighted),
            "residual_t0": weighted[0],
        }
    ratio = runs[101]["max_weighted"] / runs[201]["max_weighted"]
    band = (201.0 / 101.0) ** 0.5
    ok = (
        runs[101]["tracking_sup"] <= 1e-2
        and runs[101]["residual_t0"] == 0.0
        and runs[201]["residual_t0"] == 0.0
        and band <= ratio <= 2.0 * band
    )
    return CriterionResult(
        "10", "window tracking, residual scaling in m_star, zero initial residual",
        ok, {
            "tracking_sup_101": runs[101]["tracking_sup"],
            "C_at_101": runs[101]["max_weighted"] * 101.0**0.5,
            "ratio_101_over_201": ratio,
            "band_low": band,
            "band_high": 2.0 * band,
        },
    )


def criterion_11(shared) -> CriterionResult:
    config = harness.RunConfig(m=101, n=-100, mu=DEFAULT_MU, k0=DEFAULT_K0,
                               cutoff=341, grid_size=1024)
    identity = harness.scaling_equivalence_check(config, 20.0 * (config.m + config.n))
    scaled = harness.scaling_equivalence_check(config, 40.0)
    ok = identity["sup_difference"] == 0.0 and scaled["sup_difference"] <= 1e-6
    return CriterionResult(
        "11", "amplitude-scaling equivalence of the rescaled equation",
        ok, {
            "identity_diff": identity["sup_difference"],
            "scaled_diff": scaled["sup_difference"],
            "mu_prime": scaled["mu_prime"],
        },
    )


CRITERIA = [
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5a,
    criterion_5b, criterion_6, criterion_7, criterion_8, criterion_9,
    criterion_10, criterion_11,
]


def run_all(out_dir: Path | None = None) -> list[CriterionResult]:
    """Run every primary criterion; optionally emit the experiment CSVs."""
    shared = _Shared()
    results = [crit(shared) for crit in CRITERIA]
    if out_dir is not None:
        out_dir = Path(out_dir)
        config = harness.RunConfig()
        harness.run_exchange_experiment(config, out_dir=out_dir / "compare")
        for (m, n, cutoff, grid) in ((101, -100, 341, 1024), (201, -200, 682, 2048)):
            quad, traj, _, _ = shared.pde_window(m, n, cutoff, grid)
            cfg = harness.RunConfig(m=m, n=n, cutoff=cutoff, grid_size=grid)
            scaling_dir = out_dir / "scaling"
            scaling_dir.mkdir(parents=True, exist_ok=True)
            harness.emit_series(
                "pde", harness.pde_rows(traj, quad, 0.5), harness.PDE_COLUMNS,
                scaling_dir / f"pde_m{quad.m_star}.csv", cfg.resolved(),
            )
    return results
