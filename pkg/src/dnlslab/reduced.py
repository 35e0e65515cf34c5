"""Planar reduction (phi1, K) of the four-mode flow, with period detection.

Two coefficient variants ship.  "verbatim" keeps the printed reduction
coefficients (7/2, 12); "consistent" carries (3/2, 6), the unique pair for
which the energy

    H = 33/8 mu (K^2 + (1-K)^2) + 3/2 mu K(1-K)
        - 3 mu (K(1-K))^{3/2} cos(phi1)

is a first integral.  The default everywhere is the consistent variant.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numba import njit

from . import _dp45

__all__ = [
    "ReducedCoefficients",
    "ReducedState",
    "PeriodResult",
    "ReducedTrajectory",
    "VERBATIM",
    "CONSISTENT",
    "coefficients",
    "reduced_rhs",
    "hamiltonian",
    "hamiltonian_gradient",
    "heteroclinic_residual",
    "integrate_reduced",
    "find_period",
    "EQUILIBRIA",
]

K_BOUNDARY_EPS = 1e-12


class ReducedDomainError(ValueError):
    """K left the open interval (0, 1)."""


@dataclass(frozen=True)
class ReducedCoefficients:
    variant: str
    p: Fraction
    q: Fraction


VERBATIM = ReducedCoefficients("verbatim", Fraction(7, 2), Fraction(12))
CONSISTENT = ReducedCoefficients("consistent", Fraction(3, 2), Fraction(6))


def coefficients(variant: str) -> ReducedCoefficients:
    try:
        return {"verbatim": VERBATIM, "consistent": CONSISTENT}[variant]
    except KeyError:
        raise ValueError(f"unknown variant {variant!r}") from None


@dataclass(frozen=True)
class ReducedState:
    phi1: float
    k: float
    t: float = 0.0


# interior fixed points: sin(phi1) = 0 and K = 1/2
EQUILIBRIA = ((0.0, 0.5), (math.pi, 0.5), (-math.pi, 0.5))


def _check_k(k: float) -> None:
    if not (K_BOUNDARY_EPS < k < 1.0 - K_BOUNDARY_EPS):
        raise ReducedDomainError(
            f"K={k!r} is outside the open strip (0, 1); trajectories of "
            "interest stay interior"
        )


def reduced_rhs(state: ReducedState, mu: float, coeffs: ReducedCoefficients):
    """(dphi1/dt, dK/dt) for the planar system."""
    _check_k(state.k)
    phi1, k = state.phi1, state.k
    root = math.sqrt(k * (1.0 - k))
    dphi = 9.0 * mu * (1.0 - 2.0 * k) * (float(coeffs.p) + root * math.cos(phi1))
    dk = float(coeffs.q) * mu * root**3 * math.sin(phi1)
    return dphi, dk


def hamiltonian(phi1: float, k: float, mu: float) -> float:
    """Conserved energy of the consistent flow; defined on 0 <= K <= 1."""
    if not 0.0 <= k <= 1.0:
        raise ValueError(f"K={k!r} outside [0, 1]")
    q = k * (1.0 - k)
    return mu * (
        4.125 * (k**2 + (1.0 - k) ** 2)
        + 1.5 * q
        - 3.0 * q**1.5 * math.cos(phi1)
    )


def hamiltonian_gradient(phi1: float, k: float, mu: float):
    """(dH/dphi1, dH/dK), closed form."""
    q = k * (1.0 - k)
    root = math.sqrt(q)
    dh_dphi = 3.0 * mu * q**1.5 * math.sin(phi1)
    dh_dk = -2.25 * mu * (1.0 - 2.0 * k) * (3.0 + 2.0 * root * math.cos(phi1))
    return dh_dphi, dh_dk


def heteroclinic_residual(phi1: float, k: float) -> float:
    """K(1-K)(27/4 + 3 sqrt(K(1-K)) cos phi1) - 21/16; zero on the separatrix."""
    q = k * (1.0 - k)
    return q * (6.75 + 3.0 * math.sqrt(q) * math.cos(phi1)) - 1.3125


@njit(cache=True)
def _rhs(t, y, p):
    mu, pc, qc = p[0], p[1], p[2]
    phi1, k = y[0], y[1]
    out = np.empty(2)
    if k <= K_BOUNDARY_EPS or k >= 1.0 - K_BOUNDARY_EPS:
        out[0] = np.nan
        out[1] = np.nan
        return out
    q = k * (1.0 - k)
    root = np.sqrt(q)
    out[0] = 9.0 * mu * (1.0 - 2.0 * k) * (pc + root * np.cos(phi1))
    out[1] = qc * mu * q * root * np.sin(phi1)
    return out


@dataclass
class ReducedTrajectory:
    t: np.ndarray
    phi1: np.ndarray
    k: np.ndarray
    mu: float
    coeffs: ReducedCoefficients

    def hamiltonian_series(self) -> np.ndarray:
        return np.array([hamiltonian(p, k, self.mu) for p, k in zip(self.phi1, self.k)])

    def residual_series(self) -> np.ndarray:
        return np.array([heteroclinic_residual(p, k) for p, k in zip(self.phi1, self.k)])


def _packed(mu: float, coeffs: ReducedCoefficients) -> np.ndarray:
    return np.array([mu, float(coeffs.p), float(coeffs.q)])


def integrate_reduced(
    state0: ReducedState,
    mu: float,
    coeffs: ReducedCoefficients = CONSISTENT,
    horizon: float = 10.0,
    tol: float = 1e-12,
    t_samples=None,
    n_samples: int = 1025,
) -> ReducedTrajectory:
    """Adaptive RK45 of the planar system with dense-output sampling."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    _check_k(state0.k)
    if t_samples is None:
        t_samples = np.linspace(0.0, horizon, n_samples)
    y0 = np.array([state0.phi1, state0.k])
    try:
        out, _ = _dp45.integrate(
            _rhs, 0.0, y0, float(horizon), t_samples, _packed(mu, coeffs),
            rtol=tol, atol=tol,
        )
    except _dp45.IntegrationError as err:
        if np.isnan(err.y).any() or not (
            K_BOUNDARY_EPS < err.y[1] < 1.0 - K_BOUNDARY_EPS
        ):
            raise ReducedDomainError(
                f"K reached the boundary clamp near t={err.t}"
            ) from err
        raise
    return ReducedTrajectory(
        t=np.asarray(t_samples, dtype=float), phi1=out[:, 0], k=out[:, 1],
        mu=mu, coeffs=coeffs,
    )


@dataclass(frozen=True)
class PeriodResult:
    classification: str  # "periodic" | "equilibrium" | "no-return"
    half_period: float | None
    k0: float | None
    kt: float | None
    full_period: float | None


def _wrap(angle: float) -> float:
    return (angle + math.pi) % (2.0 * math.pi) - math.pi


def find_period(
    state0: ReducedState,
    mu: float,
    coeffs: ReducedCoefficients = CONSISTENT,
    tol: float = 1e-8,
    ode_tol: float = 1e-12,
) -> PeriodResult:
    """Locate the first recurrence of (phi1 mod 2pi, K).

    The half period T is reported as the time of maximal |K - K(0)| within
    the detected cycle; K(0) + K(T) = 1 holds on the exchange orbits inside
    the separatrix and is reported, not enforced.
    """
    dphi, dk = reduced_rhs(state0, mu, coeffs)
    if math.hypot(dphi, dk) < tol:
        return PeriodResult("equilibrium", None, state0.k, state0.k, None)

    horizon = 100.0 / abs(mu)
    n_scan = 20001
    traj = integrate_reduced(
        state0, mu, coeffs, horizon=horizon, tol=ode_tol, n_samples=n_scan
    )
    p = _packed(mu, coeffs)
    y0 = np.array([state0.phi1, state0.k])

    def state_at(t_prev, y_prev, t_target):
        if t_target <= t_prev:
            return y_prev
        out, _ = _dp45.integrate(
            _rhs, t_prev, y_prev.copy(), t_target, np.array([t_target]), p,
            rtol=ode_tol, atol=ode_tol,
        )
        return out[0]

    # section function: phi1 returns to phi1(0) mod 2pi
    sect = np.sin(0.5 * (traj.phi1 - state0.phi1))
    recurrence = None
    for i in range(1, n_scan - 1):
        if sect[i] == 0.0 or sect[i] * sect[i + 1] < 0.0:
            lo_t, hi_t = traj.t[i], traj.t[i + 1]
            y_lo = np.array([traj.phi1[i], traj.k[i]])
            g_lo = sect[i]
            y_land = y_lo
            for _ in range(80):
                mid = 0.5 * (lo_t + hi_t)
                y_mid = state_at(lo_t, y_lo, mid)
                g_mid = math.sin(0.5 * (y_mid[0] - state0.phi1))
                if g_lo * g_mid <= 0.0:
                    hi_t = mid
                else:
                    lo_t, y_lo, g_lo = mid, y_mid, g_mid
                y_land = y_mid
                if hi_t - lo_t < 1e-13 * max(1.0, mid):
                    break
            t_cross = 0.5 * (lo_t + hi_t)
            if t_cross <= 10.0 * tol / max(abs(dphi), abs(dk)):
                continue
            if abs(y_land[1] - state0.k) <= tol:
                recurrence = (t_cross, y_land)
                break
    if recurrence is None:
        return PeriodResult("no-return", None, state0.k, None, None)

    full_period, _ = recurrence
    # K extrema inside the cycle sit on sin(phi1) = 0
    fine_t = np.linspace(0.0, full_period, 8193)
    fine = integrate_reduced(
        state0, mu, coeffs, horizon=full_period, tol=ode_tol, t_samples=fine_t
    )
    g = np.sin(fine.phi1)
    best = (0.0, state0.k)
    for i in range(1, fine_t.size - 1):
        if g[i] == 0.0 or g[i] * g[i + 1] < 0.0:
            lo_t, hi_t = fine.t[i], fine.t[i + 1]
            y_lo = np.array([fine.phi1[i], fine.k[i]])
            g_lo = g[i]
            y_land = y_lo
            for _ in range(80):
                mid = 0.5 * (lo_t + hi_t)
                y_mid = state_at(lo_t, y_lo, mid)
                g_mid = math.sin(y_mid[0])
                if g_lo * g_mid <= 0.0:
                    hi_t = mid
                else:
                    lo_t, y_lo, g_lo = mid, y_mid, g_mid
                y_land = y_mid
                if hi_t - lo_t < 1e-13 * max(1.0, mid):
                    break
            t_ext = 0.5 * (lo_t + hi_t)
            if abs(y_land[1] - state0.k) > abs(best[1] - state0.k):
                best = (t_ext, y_land[1])
    half_period, kt = best
    return PeriodResult(
        classification="periodic",
        half_period=half_period,
        k0=state0.k,
        kt=kt,
        full_period=full_period,
    )
