"""Closed-form spectral estimates and the Gersgorin energy threshold.

Four pure evaluations: the near-diagonal finiteness envelope (what the
|xi| < delta window of a diagonal entry can contribute), a uniform lower
bound on diagonal entries, an upper bound on off-diagonal magnitudes, and
the threshold E* where diagonal dominance stops excluding a zero of the
principal matrix.  Below E* every Gersgorin disk excludes zero, so the true
ground state satisfies E_gr >= E*.

On Euclidean3 the heat kernel is exactly Gaussian and the generic bound
constants collapse to B = C = D = 1, A = 1/2, with the volume term dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import CurveFamily
from .manifolds import DomainError


@dataclass(frozen=True)
class BoundConstants:
    A: float = 0.5
    B: float = 1.0
    C: float = 1.0
    D: float = 1.0
    F: float = 1.0
    V: float = math.inf  # manifold volume; inf drops the F-term

    def __post_init__(self):
        if min(self.A, self.B, self.C, self.D, self.F) <= 0 or self.V <= 0:
            raise DomainError("bound constants must be positive")


def euclidean_constants() -> BoundConstants:
    return BoundConstants()


def _sgn(x):
    return 0.0 if x == 0 else math.copysign(1.0, x)


def _check_subthreshold(m, *energies):
    if m <= 0:
        raise DomainError("mass must be positive")
    for e in energies:
        if not -m < e < m:
            raise DomainError(f"energy argument {e} outside (-{m}, {m})")


def near_diagonal_envelope(E, mu, m, constants: BoundConstants = BoundConstants(),
                           kappa_delta: float = 0.0) -> float:
    """Envelope for the |xi| < delta diagonal window contribution.

    (B sqrt(C) / (4 pi sqrt(1 - kappa* delta))) [ log sqrt((m^2-E^2)/(m^2-mu^2))
        + sgn(mu) log((m+|mu|)/sqrt(m^2-mu^2)) - sgn(E) log((m+|E|)/sqrt(m^2-E^2)) ]

    Vanishes at E = mu; grows like (1 - kappa* delta)^{-1/2} toward a fully
    curved window.
    """
    _check_subthreshold(m, E, mu)
    if not 0.0 <= kappa_delta < 1.0:
        raise DomainError("kappa* delta must lie in [0, 1)")
    qe, qm = m * m - E * E, m * m - mu * mu
    val = (
        0.5 * math.log(qe / qm)
        + _sgn(mu) * math.log((m + abs(mu)) / math.sqrt(qm))
        - _sgn(E) * math.log((m + abs(E)) / math.sqrt(qe))
    )
    pref = constants.B * math.sqrt(constants.C) / (4.0 * math.pi * math.sqrt(1.0 - kappa_delta))
    return pref * val


def _phi_term(E, m):
    """(m/E) log(m/(m-E)), continued through E = 0 by its series."""
    x = E / m
    if abs(x) < 1e-4:
        return 1.0 + x / 2.0 + x * x / 3.0
    return -math.log1p(-x) / x


def diagonal_lower_bound(E, mu_min, m, L_min, constants: BoundConstants = BoundConstants()) -> float:
    """Uniform lower bound on the subtracted diagonal entries.

    (A sqrt(D) / 8 pi^2) [ (1 - (pi/2) e^{-m L_min / 2 sqrt(D)}) log((m-E)/(m-mu_min))
        + (m/E) log(m/(m-E)) - (m/mu_min) log(m/(m-mu_min)) ]
    """
    _check_subthreshold(m, E, mu_min)
    if not E < mu_min:
        raise DomainError("lower bound needs E < mu_min")
    if L_min <= 0:
        raise DomainError("L_min must be positive")
    gap_term = (1.0 - 0.5 * math.pi * math.exp(-m * L_min / (2.0 * math.sqrt(constants.D)))) * math.log(
        (m - E) / (m - mu_min)
    )
    val = gap_term + _phi_term(E, m) - _phi_term(mu_min, m)
    return constants.A * math.sqrt(constants.D) / (8.0 * math.pi**2) * val


def offdiagonal_upper_bound(E, m, d_min, L_max, constants: BoundConstants = BoundConstants(),
                            V: float | None = None) -> float:
    """Upper bound on |Phi_ij|, i != j; decreasing in d_min, pole at E = m."""
    _check_subthreshold(m, E)
    if d_min <= 0:
        raise DomainError("d_min must be positive")
    if L_max <= 0:
        raise DomainError("L_max must be positive")
    if V is None:
        V = constants.V
    sc = math.sqrt(constants.C)
    main = (
        constants.B * sc / (4.0 * math.pi**2)
        * (m / (m - E))
        * (L_max / d_min)
        * (1.0 + sc / (m * d_min))
    )
    vol = 0.0 if math.isinf(V) else 0.5 * constants.F / (m * (m - E)) * (L_max / V)
    return main + vol


@dataclass(frozen=True)
class GersgorinResult:
    E_star: float
    status: str  # "crossing" | "no_exclusion" | "holds_on_whole_bracket" | "single_disk"
    bracket: tuple


def gersgorin_threshold(
    family: CurveFamily,
    m: float | None = None,
    constants: BoundConstants = BoundConstants(),
    N: int | None = None,
    grid_points: int = 512,
) -> GersgorinResult:
    """Threshold E* with E_gr >= E* from disk exclusion.

    Solves diagonal_lower_bound(E) = (N-1) * offdiagonal_upper_bound(E) on
    (-m, mu_min).  The left side falls and the right side rises with E, so a
    crossing is unique.  With no crossing the result degrades gracefully:
    dominance everywhere pins E* = mu_min ("holds_on_whole_bracket"); exclusion
    nowhere returns the vacuous E* = -m ("no_exclusion").  N = 1 disks have
    zero radius, so E* = mu_1 exactly.
    """
    if m is None:
        m = family.mass
    if N is None:
        N = len(family)
    mu_min = float(np.min(family.mu))
    if N == 1:
        return GersgorinResult(mu_min, "single_disk", (-m, mu_min))

    lengths = [c.length for c in family.curves]
    L_min, L_max = min(lengths), max(lengths)
    off = family.d_matrix[~np.eye(len(family), dtype=bool)]
    d_min = float(np.min(off))
    V = constants.V

    def h(E):
        return diagonal_lower_bound(E, mu_min, m, L_min, constants) - (N - 1) * offdiagonal_upper_bound(
            E, m, d_min, L_max, constants, V
        )

    lo = -m * (1.0 - 1e-6)
    hi = mu_min - 1e-9 * m
    grid = np.linspace(lo, hi, grid_points)
    values = np.array([h(float(E)) for E in grid])
    if np.all(values < 0):
        return GersgorinResult(-m, "no_exclusion", (lo, hi))
    if np.all(values > 0):
        return GersgorinResult(mu_min, "holds_on_whole_bracket", (lo, hi))

    down = np.where((values[:-1] > 0) & (values[1:] <= 0))[0]
    if len(down) == 0:  # exclusion never holds from the bracket floor upward
        return GersgorinResult(-m, "no_exclusion", (lo, hi))
    k = int(down[0]) + 1  # first grid point past the first downward crossing
    a, b = float(grid[k - 1]), float(grid[k])
    fa = values[k - 1]
    while b - a > 1e-10 * m:
        mid = 0.5 * (a + b)
        fm = h(mid)
        if fm == 0.0:
            return GersgorinResult(mid, "crossing", (lo, hi))
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return GersgorinResult(0.5 * (a + b), "crossing", (lo, hi))
