"""Cross-model experiments: reduced vs toy vs PDE, residual norms, scaling.

All outputs are deterministic: CSV bytes depend only on the configuration,
and every CSV carries a JSON sidecar embedding the full resolved config.
"""

import csv
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import reduced, spectral, toy
from .resonance import ResonantQuad, build_quad

__all__ = [
    "ResidualNorms",
    "RunConfig",
    "residual_norms",
    "guaranteed_window",
    "run_exchange_experiment",
    "scaling_equivalence_check",
    "emit_series",
    "REDUCED_COLUMNS",
    "TOY_COLUMNS",
    "PDE_COLUMNS",
]

REDUCED_COLUMNS = ["t", "phi1", "K", "H", "het_residual"]
TOY_COLUMNS = [
    "t",
    "re_a1", "im_a1", "re_a2", "im_a2", "re_b1", "im_b1", "re_b2", "im_b2",
    "K", "inv1", "inv2", "inv3", "inv4",
]
PDE_COLUMNS = [
    "t", "M", "E", "P",
    "I_alpha1", "I_alpha2", "I_beta1", "I_beta2",
    "A_L", "A_H", "apriori_ratio",
]

# Regime ratios M*/|lambda| and M*^2/|mu| count as "large" beyond this.
REGIME_FACTOR = 10.0


@dataclass(frozen=True)
class ResidualNorms:
    delta: float
    low_cutoff: int
    a_low: float
    a_high: float
    weighted: float


def residual_norms(
    field_: spectral.SpectralField,
    quad: ResonantQuad,
    delta: float = 0.5,
    low_cutoff: int | None = None,
) -> ResidualNorms:
    """Off-cluster l1 norms: plain below the low cutoff, <xi>^delta above.

    weighted = m_star^delta * A_L + A_H, the norm whose guaranteed-window
    bound scales as O(1/m_star^delta).
    """
    if not 0.5 <= delta < 1.0:
        raise ValueError("delta must lie in [1/2, 1)")
    if low_cutoff is None:
        low_cutoff = 4 * abs(quad.m + quad.n)
    xi = field_.wavenumbers
    mags = np.abs(field_.coefficients)
    off = np.ones(xi.size, dtype=bool)
    for mode in quad.modes:
        off &= xi != mode
    low = off & (np.abs(xi) <= low_cutoff)
    high = off & (np.abs(xi) > low_cutoff)
    a_low = float(np.sum(mags[low]))
    a_high = float(np.sum((1.0 + xi[high].astype(float) ** 2) ** (delta / 2.0) * mags[high]))
    return ResidualNorms(
        delta=delta,
        low_cutoff=int(low_cutoff),
        a_low=a_low,
        a_high=a_high,
        weighted=quad.m_star**delta * a_low + a_high,
    )


def guaranteed_window(lam: float, mu: float, m_star: int) -> float:
    """0.1 * min(1/(|lambda| m_star), 1/(lambda^2 + |mu|))."""
    return 0.1 * min(1.0 / (abs(lam) * m_star), 1.0 / (lam**2 + abs(mu)))


@dataclass
class RunConfig:
    m: int = 101
    n: int = -100
    mu: float = 1.0
    k0: float = 0.2
    phases: tuple = (0.0, 0.0, 0.0, 0.0)
    delta: float = 0.5
    cutoff: int = 341
    grid_size: int = 1024
    dt: float | None = None
    steps: int | None = None
    sample_stride: int = 1
    variant: str = "consistent"
    ode_tol: float = 1e-12
    recurrence_tol: float = 1e-8
    pde_horizon: str = "window"  # "window" | "period" (exploratory)

    def quad(self) -> ResonantQuad:
        return build_quad(self.m, self.n)

    @property
    def lam(self) -> float:
        return 20.0 * (self.m + self.n)

    def regime_report(self) -> dict:
        quad = self.quad()
        scale_ratio = quad.m_star / abs(self.lam)
        coupling_ratio = quad.m_star**2 / abs(self.mu) if self.mu else math.inf
        return {
            "m_star_over_lambda": scale_ratio,
            "m_star_sq_over_mu": coupling_ratio,
            "scale_separated": scale_ratio >= REGIME_FACTOR,
            "weak_coupling": coupling_ratio >= REGIME_FACTOR,
        }

    def resolved(self) -> dict:
        out = asdict(self)
        out["phases"] = list(self.phases)
        out["lambda"] = self.lam
        out["regime"] = self.regime_report()
        return out


def _format(value: float) -> str:
    return repr(float(value))


def emit_series(kind: str, rows, columns, path, config: dict) -> None:
    """Deterministic CSV plus a JSON sidecar with the resolved config."""
    try:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_format(v) for v in row])
        sidecar = {"kind": kind, "columns": list(columns), "config": config}
        with open(f"{path}.json", "w") as handle:
            json.dump(sidecar, handle, indent=2, sort_keys=True)
            handle.write("\n")
    except OSError as err:
        raise OSError(f"failed writing series to {path}: {err}") from err


def reduced_rows(traj: reduced.ReducedTrajectory):
    h = traj.hamiltonian_series()
    r = traj.residual_series()
    for i in range(traj.t.size):
        yield (traj.t[i], traj.phi1[i], traj.k[i], h[i], r[i])


def toy_rows(traj: toy.ToyTrajectory):
    inv = traj.invariants()
    for i in range(traj.t.size):
        a = traj.amps[i]
        yield (
            traj.t[i],
            a[0].real, a[0].imag, a[1].real, a[1].imag,
            a[2].real, a[2].imag, a[3].real, a[3].imag,
            abs(a[0]) ** 2, inv[i, 0], inv[i, 1], inv[i, 2], inv[i, 3],
        )


def pde_rows(traj: spectral.PdeTrajectory, quad: ResonantQuad, delta: float):
    for i in range(len(traj)):
        fld = traj.field_at(i)
        cons = spectral.conserved_triple(fld, traj.lam, traj.mu)
        norms = residual_norms(fld, quad, delta)
        ratio = spectral.weighted_h1_norm(fld) / quad.m_star
        yield (
            traj.times[i], cons.mass, cons.energy, cons.momentum,
            abs(fld.coefficient(quad.alpha1)) ** 2,
            abs(fld.coefficient(quad.alpha2)) ** 2,
            abs(fld.coefficient(quad.beta1)) ** 2,
            abs(fld.coefficient(quad.beta2)) ** 2,
            norms.a_low, norms.a_high, ratio,
        )


@dataclass
class LevelResult:
    ok: bool
    error: str | None = None
    data: dict = field(default_factory=dict)


def run_exchange_experiment(config: RunConfig, out_dir=None) -> dict:
    """Run all four model levels from aligned initial data and compare.

    Reduced (both variants), toy (both flavors) and the PDE are started from
    the same canonical data; the report carries K(t) curves, cross-level
    sup-differences, invariant drifts, residual-norm series, the detected
    half period and the measured exchange amplitude.  Failures are reported
    per level without aborting the others.
    """
    quad = config.quad()
    report: dict = {"config": config.resolved(), "levels": {}}
    levels = report["levels"]
    phi0 = float(
        2 * config.phases[0] + config.phases[1]
        - 2 * config.phases[2] - config.phases[3]
    )

    period = None
    for variant in ("consistent", "verbatim"):
        try:
            pr = reduced.find_period(
                reduced.ReducedState(phi0, config.k0), config.mu,
                reduced.coefficients(variant),
                tol=config.recurrence_tol, ode_tol=config.ode_tol,
            )
            data = {"period": pr}
            if variant == "consistent" and pr.classification == "periodic":
                period = pr
            levels[f"reduced-{variant}"] = LevelResult(ok=True, data=data)
        except Exception as err:  # noqa: BLE001 - per-level fault isolation
            levels[f"reduced-{variant}"] = LevelResult(ok=False, error=str(err))

    if period is None:
        report["half_period"] = None
        report["c_star"] = None
        horizon = 2.0 / abs(config.mu)
    else:
        report["half_period"] = period.half_period
        report["exchange_defect"] = abs(period.k0 + period.kt - 1.0)
        report["c_star"] = max(0.5 - period.k0, period.kt - 0.5)
        horizon = period.full_period

    t_samples = np.linspace(0.0, horizon, 513)
    trajectories = {}
    try:
        tr_red = reduced.integrate_reduced(
            reduced.ReducedState(phi0, config.k0), config.mu,
            reduced.coefficients(config.variant), horizon=horizon,
            tol=config.ode_tol, t_samples=t_samples,
        )
        trajectories["reduced"] = tr_red
        levels["reduced-trajectory"] = LevelResult(ok=True)
    except Exception as err:  # noqa: BLE001
        levels["reduced-trajectory"] = LevelResult(ok=False, error=str(err))

    fld0 = spectral.synthesize_field(
        quad, config.k0, config.phases, cutoff=config.cutoff,
        grid_size=config.grid_size,
    )
    p0 = spectral.conserved_triple(fld0, config.lam, config.mu).momentum
    report["p0"] = p0

    for flavor in ("gauged", "full"):
        try:
            params = toy.ToyParams(quad, config.mu, flavor=flavor, p0=p0)
            tr = toy.integrate_toy(
                toy.canonical_amplitudes(config.k0, config.phases), params,
                horizon=horizon, tol=config.ode_tol, t_samples=t_samples,
            )
            trajectories[f"toy-{flavor}"] = tr
            drift = np.max(np.abs(tr.invariants() - tr.invariants()[0:1]))
            levels[f"toy-{flavor}"] = LevelResult(
                ok=True, data={"invariant_drift": float(drift)}
            )
        except Exception as err:  # noqa: BLE001
            levels[f"toy-{flavor}"] = LevelResult(ok=False, error=str(err))

    if "reduced" in trajectories and "toy-gauged" in trajectories:
        sup = float(
            np.max(np.abs(trajectories["toy-gauged"].k - trajectories["reduced"].k))
        )
        report["toy_vs_reduced_sup"] = sup

    window = guaranteed_window(config.lam, config.mu, quad.m_star)
    report["window"] = window
    dt = config.dt if config.dt is not None else spectral.suggested_dt(
        fld0, config.lam, config.mu
    )
    if config.pde_horizon == "period" and period is not None:
        pde_end = period.full_period
        report["pde_exploratory"] = True
    else:
        pde_end = window
        report["pde_exploratory"] = False
    steps = config.steps if config.steps is not None else int(math.ceil(pde_end / dt))
    report["pde_dt"] = dt
    report["pde_steps"] = steps
    try:
        tr_pde = spectral.evolve(
            fld0, config.lam, config.mu, dt, steps,
            sample_stride=config.sample_stride,
        )
        trajectories["pde"] = tr_pde
        cons = [
            spectral.conserved_triple(tr_pde.field_at(i), config.lam, config.mu)
            for i in (0, len(tr_pde) - 1)
        ]
        drifts = {
            "mass": abs(cons[1].mass - cons[0].mass) / abs(cons[0].mass),
            "energy": abs(cons[1].energy - cons[0].energy) / abs(cons[0].energy),
            "momentum": abs(cons[1].momentum - cons[0].momentum)
            / abs(cons[0].momentum),
        }
        norms = [
            residual_norms(tr_pde.field_at(i), quad, config.delta)
            for i in range(len(tr_pde))
        ]
        weighted = [n.weighted for n in norms]
        levels["pde"] = LevelResult(
            ok=True,
            data={
                "conservation_drift": drifts,
                "max_weighted_residual": max(weighted),
                "residual_t0": weighted[0],
                "apriori_ratio": spectral.apriori_bound(tr_pde, quad.m_star),
            },
        )
        # toy comparison restricted to the guaranteed window
        params = toy.ToyParams(quad, config.mu, flavor="full", p0=p0)
        tr_toy = toy.integrate_toy(
            toy.canonical_amplitudes(config.k0, config.phases), params,
            horizon=max(tr_pde.times[-1], 1e-12), tol=config.ode_tol,
            t_samples=tr_pde.times,
        )
        in_window = tr_pde.times <= window + 1e-15
        sup = 0.0
        for j, mode in enumerate(quad.modes):
            pde_i = np.abs(tr_pde.coefficients[:, tr_pde.cutoff + mode]) ** 2
            toy_i = np.abs(tr_toy.amps[:, j]) ** 2
            sup = max(sup, float(np.max(np.abs(pde_i - toy_i)[in_window])))
        levels["pde"].data["toy_tracking_sup"] = sup
    except Exception as err:  # noqa: BLE001
        levels["pde"] = LevelResult(ok=False, error=str(err))

    if out_dir is not None:
        write_experiment_outputs(config, trajectories, quad, out_dir)
        report["outputs"] = sorted(p.name for p in out_dir.glob("*.csv"))
    report["trajectories"] = trajectories
    return report


def write_experiment_outputs(config: RunConfig, trajectories, quad, out_dir):
    out_dir.mkdir(parents=True, exist_ok=True)
    resolved = config.resolved()
    if "reduced" in trajectories:
        emit_series(
            "reduced", reduced_rows(trajectories["reduced"]), REDUCED_COLUMNS,
            out_dir / "reduced.csv", resolved,
        )
    for flavor in ("gauged", "full"):
        key = f"toy-{flavor}"
        if key in trajectories:
            emit_series(
                "toy", toy_rows(trajectories[key]), TOY_COLUMNS,
                out_dir / f"toy_{flavor}.csv", resolved,
            )
    if "pde" in trajectories:
        emit_series(
            "pde", pde_rows(trajectories["pde"], quad, config.delta), PDE_COLUMNS,
            out_dir / "pde.csv", resolved,
        )


def scaled_coupling(lam_prime: float, m: int, n: int, mu: float) -> tuple[float, float]:
    """Amplitude factor and quintic coupling for the rescaled equation.

    v = s u with s = sqrt(20(M+N)/lambda'), transforming the resonant-case
    equation into the same equation with (lambda', mu * (lambda'/20(M+N))^2).
    """
    lam0 = 20.0 * (m + n)
    if lam_prime * (m + n) <= 0:
        raise ValueError("lambda' * (M+N) must be positive")
    s = math.sqrt(lam0 / lam_prime)
    return s, mu * (lam_prime / lam0) ** 2


def scaling_equivalence_check(config: RunConfig, lambda_prime: float) -> dict:
    """Evolve the rescaled equation and compare against the scaled reference.

    Both runs share the time grid; in exact arithmetic the scaled pair is
    identical, so the reported sup-difference isolates the transformation.
    """
    quad = config.quad()
    s, mu_prime = scaled_coupling(lambda_prime, config.m, config.n, config.mu)
    fld0 = spectral.synthesize_field(
        quad, config.k0, config.phases, cutoff=config.cutoff,
        grid_size=config.grid_size,
    )
    window = guaranteed_window(config.lam, config.mu, quad.m_star)
    dt = config.dt if config.dt is not None else spectral.suggested_dt(
        fld0, config.lam, config.mu
    )
    steps = config.steps if config.steps is not None else int(math.ceil(window / dt))

    reference = spectral.evolve(fld0, config.lam, config.mu, dt, steps)
    scaled0 = spectral.SpectralField(
        cutoff=fld0.cutoff, grid_size=fld0.grid_size,
        coefficients=s * fld0.coefficients, t=fld0.t,
    )
    transformed = spectral.evolve(scaled0, lambda_prime, mu_prime, dt, steps)
    diff = float(
        np.max(np.abs(transformed.coefficients - s * reference.coefficients))
    )
    return {
        "lambda_prime": lambda_prime,
        "mu_prime": mu_prime,
        "amplitude_factor": s,
        "mu_prime_reciprocal": config.mu * (20.0 * (config.m + config.n) / lambda_prime) ** 2,
        "sup_difference": diff,
        "dt": dt,
        "steps": steps,
    }
