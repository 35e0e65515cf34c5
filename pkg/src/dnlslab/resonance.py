"""Integer algebra of the four-frequency resonant cluster.

Everything here is exact integer arithmetic: cluster membership, the
non-degeneracy condition on pair sums, the cubic phase identity and the
quintic resonance classification.  Floating point enters only through the
coupling-dependent gauge gap.
"""

from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product

import numpy as np

__all__ = [
    "ResonantQuad",
    "NondegeneracyReport",
    "SextupleClass",
    "GaugeGap",
    "build_quad",
    "check_nondegeneracy",
    "cubic_phase",
    "classify_sextuple",
    "gauge_corrected_gap",
    "dichotomy_scan",
    "cluster_identity_scan",
]

# Fraction of m_star**2 below which a quintic gap counts as "small" for the
# resonance dichotomy; any fixed fraction < 1 exercises the classification.
GAP_FRACTION = 0.25


@dataclass(frozen=True)
class ResonantQuad:
    """Frequency cluster {alpha1, alpha2, beta1, beta2} built from (M, N)."""

    m: int
    n: int
    alpha1: int
    alpha2: int
    beta1: int
    beta2: int
    lam: float
    m_star: int

    def __post_init__(self):
        assert self.alpha1 == self.m and self.beta1 == self.n
        assert self.alpha2 == -3 * self.m - self.n
        assert self.beta2 == -3 * self.n - self.m
        # linear cluster identities, exact in integers
        assert 4 * self.alpha1 + 4 * self.beta1 + self.alpha2 + self.beta2 == 0
        assert 2 * self.alpha1 - 2 * self.beta1 + self.alpha2 - self.beta2 == 0
        assert self.m_star == max(abs(self.m), abs(self.n))

    @property
    def modes(self) -> tuple[int, int, int, int]:
        """Ordered quadruple (alpha1, alpha2, beta1, beta2)."""
        return (self.alpha1, self.alpha2, self.beta1, self.beta2)

    @property
    def raw_gap(self) -> int:
        """Quintic frequency gap 2*alpha1^2 + alpha2^2 - 2*beta1^2 - beta2^2."""
        g = (
            2 * self.alpha1**2
            + self.alpha2**2
            - 2 * self.beta1**2
            - self.beta2**2
        )
        assert g == 10 * (self.m + self.n) * (self.m - self.n)
        return g


def build_quad(m: int, n: int) -> ResonantQuad:
    """Construct the cluster for integers (m, n) with m + n != 0."""
    m, n = int(m), int(n)
    if m + n == 0:
        raise ValueError(
            f"(M, N)=({m}, {n}) rejected: lambda*(M+N) > 0 is unsatisfiable "
            "because M+N = 0"
        )
    return ResonantQuad(
        m=m,
        n=n,
        alpha1=m,
        alpha2=-3 * m - n,
        beta1=n,
        beta2=-3 * n - m,
        lam=20.0 * (m + n),
        m_star=max(abs(m), abs(n)),
    )


@dataclass(frozen=True)
class NondegeneracyReport:
    ok: bool
    violations: tuple = ()


def check_nondegeneracy(quad: ResonantQuad) -> NondegeneracyReport:
    """Brute-force the pair-sum condition over the ordered quadruple.

    True iff all unordered pairs (with repetition) drawn from the cluster
    have pairwise distinct sums; duplicate frequencies in the quadruple fail
    here rather than being merged away.
    """
    pairs = list(combinations_with_replacement(quad.modes, 2))
    violations = []
    for (p1, p2) in combinations_with_replacement(pairs, 2):
        if sorted(p1) == sorted(p2):
            continue
        if p1[0] + p1[1] == p2[0] + p2[1]:
            violations.append((p1, p2))
    return NondegeneracyReport(ok=not violations, violations=tuple(violations))


def cubic_phase(xi1: int, xi2: int, xi3: int) -> int:
    """Phase 2*(xi1-xi2)*(xi1-xi) of a cubic interaction, xi = xi1-xi2+xi3."""
    xi1, xi2, xi3 = int(xi1), int(xi2), int(xi3)
    xi = xi1 - xi2 + xi3
    value = 2 * (xi1 - xi2) * (xi1 - xi)
    assert xi1**2 - xi2**2 + xi3**2 - xi**2 == value
    return value


@dataclass(frozen=True)
class SextupleClass:
    kind: str  # "diagonal" | "resonant-disjoint" | "non-resonant"
    support_cardinality: int
    sum_defect: int
    square_defect: int
    gap: int | None = None
    dichotomy_ok: bool | None = None
    details: dict = field(default_factory=dict)


def classify_sextuple(xis, quad: ResonantQuad | None = None) -> SextupleClass:
    """Classify a sextuple under the quintic resonance conditions.

    The odd-position multiset {xi1, xi3, xi5} is compared against the
    even-position one {xi2, xi4, xi6}.  When sums and squared sums both
    balance, equal multisets are "diagonal"; unequal ones must be disjoint
    with frequency support of cardinality >= 4.  Given a cluster, the
    five-in-cluster dichotomy (equal multisets or xi6 in the cluster) is
    additionally checked whenever the gap is small against m_star**2.
    """
    xis = tuple(int(x) for x in xis)
    if len(xis) != 6:
        raise ValueError("classify_sextuple expects exactly six integers")
    odd = sorted(xis[0::2])
    even = sorted(xis[1::2])
    sum_defect = sum(odd) - sum(even)
    square_defect = sum(x * x for x in odd) - sum(x * x for x in even)
    support = len(set(xis))

    if sum_defect != 0:
        return SextupleClass(
            kind="non-resonant",
            support_cardinality=support,
            sum_defect=sum_defect,
            square_defect=square_defect,
        )

    gap = square_defect
    dichotomy_ok = None
    if quad is not None:
        in_cluster = set(xis[:5]) <= set(quad.modes)
        if in_cluster and abs(gap) <= GAP_FRACTION * quad.m_star**2:
            dichotomy_ok = odd == even or xis[5] in quad.modes

    if square_defect != 0:
        return SextupleClass(
            kind="non-resonant",
            support_cardinality=support,
            sum_defect=0,
            square_defect=square_defect,
            gap=gap,
            dichotomy_ok=dichotomy_ok,
        )

    if odd == even:
        return SextupleClass(
            kind="diagonal",
            support_cardinality=support,
            sum_defect=0,
            square_defect=0,
            gap=0,
            dichotomy_ok=dichotomy_ok,
        )

    # balanced sums and squares with unequal multisets force disjointness
    # and support of cardinality at least 4
    assert not (set(odd) & set(even)), f"resonant sextuple {xis} not disjoint"
    assert support >= 4, f"resonant sextuple {xis} has support < 4"
    return SextupleClass(
        kind="resonant-disjoint",
        support_cardinality=support,
        sum_defect=0,
        square_defect=0,
        gap=0,
        dichotomy_ok=dichotomy_ok,
    )


@dataclass(frozen=True)
class GaugeGap:
    gauge_gap: float
    raw_gap: int


def gauge_corrected_gap(quad: ResonantQuad, lambda_used: float) -> GaugeGap:
    """Gauge-compensated phase rate 10*(a1-b1)*(a1+b1-lambda/20).

    Vanishes exactly when lambda_used = 20*(M+N); the raw quintic gap is
    exposed alongside for threshold sweeps.
    """
    gap = 10.0 * (quad.alpha1 - quad.beta1) * (
        quad.alpha1 + quad.beta1 - lambda_used / 20.0
    )
    return GaugeGap(gauge_gap=gap, raw_gap=quad.raw_gap)


def dichotomy_scan(quad: ResonantQuad) -> list[tuple[int, ...]]:
    """Exhaustively scan all 4^5 in-cluster choices with xi6 forced by the sum.

    Returns the sextuples violating the small-gap dichotomy (expected empty).
    """
    violations = []
    for tup in product(quad.modes, repeat=5):
        xi6 = tup[0] - tup[1] + tup[2] - tup[3] + tup[4]
        cls = classify_sextuple(tup + (xi6,), quad=quad)
        if cls.dichotomy_ok is False:
            violations.append(tup + (xi6,))
    return violations


def cluster_identity_scan(limit: int) -> int:
    """Exhaustive integer check of the cluster identities for |M|,|N| <= limit.

    Verifies, for every admissible pair, the two linear identities, the raw
    gap law 10*(M+N)*(M-N), and that the gauge gap vanishes at
    lambda = 20*(M+N).  Returns the number of pairs checked; raises on any
    violation.
    """
    rng = np.arange(-limit, limit + 1, dtype=np.int64)
    m, n = np.meshgrid(rng, rng, indexing="ij")
    keep = (m + n) != 0
    m, n = m[keep], n[keep]
    a1, a2 = m, -3 * m - n
    b1, b2 = n, -3 * n - m
    if np.any(2 * a1 + 2 * b1 + (a2 + b2) // 2 != 0):
        raise AssertionError("cluster identity 2a1+2b1+(a2+b2)/2 = 0 violated")
    if np.any((a2 + b2) % 2 != 0):
        raise AssertionError("a2+b2 parity violated")
    if np.any(2 * a1 - 2 * b1 + a2 - b2 != 0):
        raise AssertionError("cluster identity 2a1-2b1+a2-b2 = 0 violated")
    raw = 2 * a1**2 + a2**2 - 2 * b1**2 - b2**2
    if np.any(raw != 10 * (m + n) * (m - n)):
        raise AssertionError("raw gap law violated")
    # gauge gap at lambda = 20(M+N): 10*(a1-b1)*(a1+b1-(m+n)) == 0 exactly
    if np.any(10 * (a1 - b1) * (a1 + b1 - (m + n)) != 0):
        raise AssertionError("gauge gap at lambda=20(M+N) nonzero")
    return int(m.size)
