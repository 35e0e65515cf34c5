"""Four-mode resonant truncation: full (oscillatory) and gauged flavors.

State is the complex amplitude quadruple (a1, a2, b1, b2) on the cluster
(alpha1, alpha2, beta1, beta2).  The gauged flavor is the Hamiltonian flow
of

    H = -mu * sum(4/3 I^3 - 9/2 I^2)
        - 6 mu I_a1 sqrt(I_a2) I_b1 sqrt(I_b2) cos(phi1)

under i d'_k = dH/d(conj d_k); the full flavor carries the diagonal
phase terms and the explicit oscillation exp(-i t Omega6) removed by the
gauge, and reduces to the gauged flavor exactly when lambda = 20(M+N).
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np
from numba import njit

from . import _dp45
from .resonance import ResonantQuad

__all__ = [
    "ToyParams",
    "ToyTrajectory",
    "ActionAngles",
    "canonical_amplitudes",
    "toy_rhs_gauged",
    "toy_rhs_full",
    "integrate_toy",
    "toy_invariants",
    "actions_angles",
    "interaction_multiplicities",
    "interaction_sum_enumerated",
    "quartic_intensity_sum",
    "ANGLE_MATRIX",
    "ACTION_MATRIX",
]

# phi = ANGLE_MATRIX @ theta, J = ACTION_MATRIX @ I (symplectic pair change)
ANGLE_MATRIX = np.array(
    [[2, 1, -2, -1], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], dtype=np.int64
)
ACTION_MATRIX = np.array(
    [
        [Fraction(1, 2), 0, 0, 0],
        [Fraction(-1, 2), 1, 0, 0],
        [Fraction(1), 0, 1, 0],
        [Fraction(1, 2), 0, 0, 1],
    ],
    dtype=object,
)


@dataclass(frozen=True)
class ToyParams:
    """Cluster, couplings and conserved reference data for the toy flow."""

    quad: ResonantQuad
    mu: float
    lam: float | None = None
    m0: float = 1.5
    p0: float = 0.0
    flavor: str = "gauged"

    def __post_init__(self):
        if self.flavor not in ("full", "gauged"):
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if self.lam is None:
            object.__setattr__(self, "lam", 20.0 * (self.quad.m + self.quad.n))

    def packed(self) -> np.ndarray:
        q = self.quad
        lam = float(self.lam)
        c2 = 2.0 * (self.m0**2 * (lam**2 + 3.0 * self.mu) + 2.0 * lam * self.p0)
        return np.array(
            [
                self.mu,
                lam,
                self.m0,
                self.p0,
                float(q.alpha1),
                float(q.alpha2),
                float(q.beta1),
                float(q.beta2),
                float(q.raw_gap),
                c2,
                lam**2 + 3.0 * self.mu,
            ]
        )


def canonical_amplitudes(k0: float, phases=(0.0, 0.0, 0.0, 0.0)) -> np.ndarray:
    """Initial quadruple (sqrt K0, sqrt K0/2, sqrt 1-K0, sqrt (1-K0)/2)."""
    if not 0.0 < k0 < 1.0:
        raise ValueError(f"K0 must lie in (0, 1), got {k0}")
    mags = np.sqrt([k0, k0 / 2.0, 1.0 - k0, (1.0 - k0) / 2.0])
    return mags * np.exp(1j * np.asarray(phases, dtype=float))


@njit(cache=True)
def _interaction(y):
    a1, a2, b1, b2 = y[0], y[1], y[2], y[3]
    s = np.empty(4, dtype=np.complex128)
    s[0] = 6.0 * np.conj(a1) * np.conj(a2) * b1 * b1 * b2
    s[1] = 3.0 * np.conj(a1) * np.conj(a1) * b1 * b1 * b2
    s[2] = 6.0 * a1 * a1 * a2 * np.conj(b1) * np.conj(b2)
    s[3] = 3.0 * a1 * a1 * a2 * np.conj(b1) * np.conj(b1)
    return s


@njit(cache=True)
def _rhs_gauged(t, y, p):
    mu, m0 = p[0], p[2]
    s = _interaction(y)
    dy = np.empty(4, dtype=np.complex128)
    for i in range(4):
        inten = y[i].real * y[i].real + y[i].imag * y[i].imag
        dy[i] = 1j * (mu * inten * (4.0 * inten - 6.0 * m0) * y[i] + mu * s[i])
    return dy


@njit(cache=True)
def _dfreq_gauged(y, p):
    mu, m0 = p[0], p[2]
    w = np.empty(4)
    for i in range(4):
        inten = y[i].real * y[i].real + y[i].imag * y[i].imag
        w[i] = mu * inten * (4.0 * inten - 6.0 * m0)
    return w


@njit(cache=True)
def _diag_full(y, p):
    mu, lam, m0 = p[0], p[1], p[2]
    c2, lam2_3mu = p[9], p[10]
    sig4 = 0.0
    for i in range(4):
        inten = y[i].real * y[i].real + y[i].imag * y[i].imag
        sig4 += inten * inten
    w = np.empty(4)
    for i in range(4):
        inten = y[i].real * y[i].real + y[i].imag * y[i].imag
        xi = p[4 + i]
        w[i] = (
            (lam * xi - 6.0 * m0 * mu) * inten
            + c2
            + 4.0 * mu * inten * inten
            - lam2_3mu * sig4
        )
    return w


@njit(cache=True)
def _rhs_full(t, y, p):
    mu = p[0]
    omega = p[8]
    w = _diag_full(y, p)
    s = _interaction(y)
    ph = np.exp(1j * t * omega)  # alpha targets; beta targets use the conjugate
    dy = np.empty(4, dtype=np.complex128)
    dy[0] = 1j * (w[0] * y[0] + mu * s[0] * ph)
    dy[1] = 1j * (w[1] * y[1] + mu * s[1] * ph)
    dy[2] = 1j * (w[2] * y[2] + mu * s[2] * np.conj(ph))
    dy[3] = 1j * (w[3] * y[3] + mu * s[3] * np.conj(ph))
    return dy


def toy_rhs_gauged(amps, params: ToyParams, t: float = 0.0) -> np.ndarray:
    """Time derivative of the gauged quadruple (autonomous)."""
    if params.flavor != "gauged":
        raise ValueError("params.flavor must be 'gauged'")
    return _rhs_gauged(t, np.asarray(amps, dtype=complex), params.packed())


def toy_rhs_full(amps, params: ToyParams, t: float = 0.0) -> np.ndarray:
    """Time derivative of the full quadruple at time t (non-autonomous)."""
    if params.flavor != "full":
        raise ValueError("params.flavor must be 'full'")
    return _rhs_full(t, np.asarray(amps, dtype=complex), params.packed())


@dataclass
class ToyTrajectory:
    t: np.ndarray
    amps: np.ndarray  # (n_samples, 4) complex
    params: ToyParams

    @property
    def intensities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    @property
    def k(self) -> np.ndarray:
        return self.intensities[:, 0]

    def invariants(self) -> np.ndarray:
        inten = self.intensities
        return np.stack(
            [
                inten[:, 0] + inten[:, 2],
                inten[:, 1] + inten[:, 3],
                inten[:, 0] - 2.0 * inten[:, 1],
                inten[:, 2] - 2.0 * inten[:, 3],
            ],
            axis=1,
        )


def integrate_toy(
    amps0,
    params: ToyParams,
    horizon: float,
    tol: float = 1e-12,
    t_samples=None,
    n_samples: int = 513,
) -> ToyTrajectory:
    """Adaptive RK45 in a per-step rotating frame; sampled dense output."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if t_samples is None:
        t_samples = np.linspace(0.0, horizon, n_samples)
    y0 = np.asarray(amps0, dtype=complex)
    rhs = _rhs_full if params.flavor == "full" else _rhs_gauged
    dfreq = _diag_full if params.flavor == "full" else _dfreq_gauged
    out, _ = _dp45.integrate_lawson(
        rhs, dfreq, 0.0, y0, float(horizon), t_samples, params.packed(),
        rtol=tol, atol=tol,
    )
    return ToyTrajectory(t=np.asarray(t_samples, dtype=float), amps=out, params=params)


def toy_invariants(amps) -> np.ndarray:
    """The four conserved intensity combinations, in grouping order."""
    inten = np.abs(np.asarray(amps, dtype=complex)) ** 2
    return np.array(
        [
            inten[0] + inten[2],
            inten[1] + inten[3],
            inten[0] - 2.0 * inten[1],
            inten[2] - 2.0 * inten[3],
        ]
    )


def quartic_intensity_sum(amps) -> float:
    """Sum of |c|^4 over the quadruple (5/4 - 5/2 K(1-K) on canonical data)."""
    inten = np.abs(np.asarray(amps, dtype=complex)) ** 2
    return float(np.sum(inten**2))


def gauged_hamiltonian(amps, mu: float) -> float:
    """Energy generating the gauged flow.

    H = -mu sum(4/3 I^3 - 9/2 I^2)
        - 6 mu Re[d_a1^2 d_a2 conj(d_b1)^2 conj(d_b2)],
    i.e. the coupling is -6 mu I_a1 sqrt(I_a2) I_b1 sqrt(I_b2) cos(phi1).
    """
    amps = np.asarray(amps, dtype=complex)
    inten = np.abs(amps) ** 2
    diag = -mu * float(np.sum((4.0 / 3.0) * inten**3 - 4.5 * inten**2))
    z = amps[0] ** 2 * amps[1] * np.conj(amps[2]) ** 2 * np.conj(amps[3])
    return diag - 6.0 * mu * float(z.real)


@dataclass(frozen=True)
class ActionAngles:
    actions: np.ndarray  # I per mode
    angles: np.ndarray  # theta per mode, NaN where the mode vanishes
    phi: np.ndarray  # transformed angles, phi[0] is the transfer phase
    j: np.ndarray  # transformed actions
    undefined: tuple = ()

    @property
    def phi1(self) -> float:
        return float(self.phi[0])


def actions_angles(amps) -> ActionAngles:
    """Polar coordinates and the symplectic (phi, J) change of variables."""
    amps = np.asarray(amps, dtype=complex)
    actions = np.abs(amps) ** 2
    undefined = tuple(int(i) for i in np.nonzero(actions == 0.0)[0])
    angles = np.where(actions > 0.0, np.angle(amps), np.nan)
    phi = ANGLE_MATRIX.astype(float) @ np.nan_to_num(angles, nan=0.0)
    if undefined:
        touched = (np.abs(ANGLE_MATRIX) @ (actions == 0.0).astype(np.int64)) > 0
        phi = np.where(touched, np.nan, phi)
    i1, i2, i3, i4 = actions
    j = np.array([i1 / 2.0, -i1 / 2.0 + i2, i1 + i3, i1 / 2.0 + i4])
    return ActionAngles(
        actions=actions, angles=angles, phi=phi, j=j, undefined=undefined
    )


def interaction_multiplicities(quad: ResonantQuad) -> dict[int, int]:
    """Count ordered source tuples per target by exhaustive enumeration.

    For each target mode, counts ordered (xi1, xi3, xi5; xi2, xi4) over the
    cluster whose multiset pair equals {{a1,a1,a2},{b1,b1,b2}}.
    """
    a1, a2, b1, b2 = quad.modes
    lam_star = {
        tuple(sorted((a1, a1, a2))),
        tuple(sorted((b1, b1, b2))),
    }
    counts = {mode: 0 for mode in quad.modes}
    for target in quad.modes:
        for srcs in product(quad.modes, repeat=5):
            odd = tuple(sorted((srcs[0], srcs[2], srcs[4])))
            even = tuple(sorted((srcs[1], srcs[3], target)))
            if {odd, even} == lam_star and odd != even:
                counts[target] += 1
    return counts


def interaction_sum_enumerated(amps, quad: ResonantQuad, target_index: int) -> complex:
    """Ordered-tuple evaluation of the cluster interaction for one target.

    Independent oracle for the closed-form products used in the jitted
    right-hand sides: sums c_{xi1} conj(c_{xi2}) c_{xi3} conj(c_{xi4}) c_{xi5}
    over all ordered arrangements hitting the resonant multiset pair.
    """
    amps = np.asarray(amps, dtype=complex)
    modes = quad.modes
    target = modes[target_index]
    a1, a2, b1, b2 = modes
    lam_star = {tuple(sorted((a1, a1, a2))), tuple(sorted((b1, b1, b2)))}
    lookup = {}
    for mode, value in zip(modes, amps):
        lookup.setdefault(mode, value)
    total = 0.0 + 0.0j
    for srcs in product(modes, repeat=5):
        odd = tuple(sorted((srcs[0], srcs[2], srcs[4])))
        even = tuple(sorted((srcs[1], srcs[3], target)))
        if {odd, even} == lam_star and odd != even:
            total += (
                lookup[srcs[0]]
                * np.conj(lookup[srcs[1]])
                * lookup[srcs[2]]
                * np.conj(lookup[srcs[3]])
                * lookup[srcs[4]]
            )
    return complex(total)
