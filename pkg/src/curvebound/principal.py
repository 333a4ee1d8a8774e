"""Assembly of the renormalized principal matrix over a curve family.

Matrix convention (N curves, arc lengths L_i, energy E inside (-m, m)):

    Phi_ii(E) = 1/lambda_R + (1/L_i)  iint ds ds' G_sub(E; x_i(s), x_i(s'))
    Phi_ij(E) =            - (1/sqrt(L_i L_j)) iint ds ds' G_plain(E; x_i, x_j)

where G_sub is the subtracted diagonal integrand of the active prescription:
the difference kernel G(mu_i) - G(E) for the bound-state prescription, or the
intrinsic-circle counterterm combination at scale mu for the flow
prescription.  Off-diagonal blocks need no subtraction.

The (s, s') double integral is reduced to an outer arc node and an inner
relative coordinate xi; the inner integral splits at the curve's window
half-width delta into a log-adapted band (xi = delta e^{-w}, which tames the
log(1/xi) coincidence growth) and geometric far panels.  Homogeneous curves
(circles, torus winding lines) need a single outer node; the isometry group
makes the inner integral position independent.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .curves import CurveFamily, SampledCurve
from .manifolds import DomainError, Euclidean3, ManifoldSpec, pair_displacement
from .quadrature import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    SingWindowConfig,
    _leggauss,
    pair_derivative_batch,
    pair_plain_batch,
    pair_renormalized_batch,
    rg_pair_batch,
)


@dataclass(frozen=True)
class MinimalBoundState:
    """Subtraction at the per-curve binding scales mu_i, inverse coupling zero."""


@dataclass(frozen=True)
class RGScale:
    """Running-coupling prescription: counterterm circle at scale mu > 0.

    lambda_R enters only additively through 1/lambda_R; math.inf is accepted
    and reproduces the zero-inverse-coupling limit.
    """

    mu: float
    lambda_R: float

    def __post_init__(self):
        if not self.mu > 0:
            raise DomainError("counterterm scale mu must be positive")
        if not self.lambda_R > 0:
            raise DomainError("coupling must be positive")


Prescription = Union[MinimalBoundState, RGScale]


class ConvergenceError(RuntimeError):
    """Quadrature error estimate exceeded tolerance for some matrix entry."""

    def __init__(self, message, worst_entry, err_value, tolerance):
        super().__init__(message)
        self.worst_entry = worst_entry
        self.err_value = err_value
        self.tolerance = tolerance


@dataclass(frozen=True, eq=False)
class PrincipalMatrix:
    E: float
    entries: np.ndarray
    err: np.ndarray
    band_contributions: np.ndarray  # |xi| < delta share of each diagonal entry
    fingerprint: str

    @property
    def n(self):
        return self.entries.shape[0]


# ---------------------------------------------------------------------------
# inner xi grids


def _band_grid(delta, sw: SingWindowConfig):
    """Nodes/weights for int_0^delta g(xi) dxi under xi = delta e^{-w}.

    The leftover stub below delta e^{-log_depth} contributes O(1e-10 delta)
    even against a log(1/xi) integrand; ignored.
    """
    x, gw = _leggauss(sw.log_nodes)
    w = 0.5 * sw.log_depth * (x + 1.0)
    xi = delta * np.exp(-w)
    return xi, (0.5 * sw.log_depth * gw) * xi


def _far_grid(delta, half_length, sw: SingWindowConfig):
    if half_length <= delta * (1.0 + 1e-12):
        return np.empty(0), np.empty(0)
    n_panels = max(1, int(math.ceil(math.log(half_length / delta) / math.log(sw.far_panel_ratio))))
    breaks = np.geomspace(delta, half_length, n_panels + 1)
    x, gw = _leggauss(sw.far_nodes)
    xs, ws = [], []
    for a, b in zip(breaks[:-1], breaks[1:]):
        xs.append(0.5 * (a + b) + 0.5 * (b - a) * x)
        ws.append(0.5 * (b - a) * gw)
    return np.concatenate(xs), np.concatenate(ws)


def _inner_grid(curve: SampledCurve, sw: SingWindowConfig):
    """Signed relative-arc nodes and weights covering xi in (-L/2, L/2)."""
    xb, wb = _band_grid(curve.delta_window, sw)
    xf, wf = _far_grid(curve.delta_window, 0.5 * curve.length, sw)
    xi = np.concatenate([xb, xf, -xb, -xf])
    wt = np.concatenate([wb, wf, wb, wf])
    band_mask = np.zeros(xi.shape, dtype=bool)
    band_mask[: len(xb)] = True
    band_mask[len(xb) + len(xf) : 2 * len(xb) + len(xf)] = True
    return xi, wt, band_mask


def _outer_nodes(curve: SampledCurve):
    return curve.nodes[:1] if curve.homogeneous else curve.nodes


# ---------------------------------------------------------------------------
# diagonal entries


def _diag_integral(curve, E, mu, m, manifold, cfg, kind):
    """(1/L) iint ds ds' of the requested subtracted/derivative integrand.

    Returns (value, err, band_part).  kind is one of "ren", "deriv", "rg";
    for "rg" mu is the counterterm scale.
    """
    xi, wt, band_mask = _inner_grid(curve, cfg.sing_window)
    outer = _outer_nodes(curve)
    total = err = band = 0.0
    for s in outer:
        x = curve.point_at(s)
        y = curve.point_at(s + xi)
        disp = pair_displacement(manifold, np.broadcast_to(x, y.shape), y)
        if kind == "ren":
            v, e = pair_renormalized_batch(E, mu, disp, m, manifold, cfg)
        elif kind == "deriv":
            v, e = pair_derivative_batch(E, disp, m, manifold, cfg)
        else:
            v, e = rg_pair_batch(E, mu, xi, disp, m, curve.length, manifold, cfg)
        total += float(wt @ v)
        err += float(wt @ e)
        band += float(wt[band_mask] @ v[band_mask])
    k = len(outer)
    return total / k, err / k, band / k


# ---------------------------------------------------------------------------
# off-diagonal entries


def _offdiag_integral(ci, cj, E, m, manifold, cfg, kind):
    """-(1/sqrt(L_i L_j)) iint ds ds' G(E) via the periodic node tensor rule."""
    ni, nj = len(ci.nodes), len(cj.nodes)
    ii, jj = np.meshgrid(np.arange(ni), np.arange(nj), indexing="ij")
    disp = pair_displacement(manifold, ci.points[ii.ravel()], cj.points[jj.ravel()])
    if kind == "deriv":
        v, e = pair_derivative_batch(E, disp, m, manifold, cfg)
    else:
        v, e = pair_plain_batch(E, disp, m, manifold, cfg)
    scale = math.sqrt(ci.length * cj.length) / (ni * nj)
    return -scale * float(np.sum(v)), scale * float(np.sum(e))


# ---------------------------------------------------------------------------
# public assembly


def family_fingerprint(family: CurveFamily, manifold: ManifoldSpec) -> str:
    h = hashlib.sha256()
    h.update(repr(manifold).encode())
    h.update(np.asarray(family.mu, dtype=float).tobytes())
    h.update(np.float64(family.mass).tobytes())
    for c in family.curves:
        h.update(np.asarray(c.points, dtype=float).tobytes())
    return h.hexdigest()[:16]


def _check_energy(E, m):
    if not -m < E < m:
        raise DomainError(f"energy must lie in (-{m}, {m}), got {E}")


def _entry_tolerance(value, cfg):
    return cfg.abs_tol + cfg.rel_tol * abs(value)


def assemble(
    family: CurveFamily,
    E: float,
    p: Prescription = MinimalBoundState(),
    manifold: ManifoldSpec = Euclidean3(),
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> PrincipalMatrix:
    """Principal matrix Phi(E) for the family under prescription p.

    Raises ConvergenceError when any entry's quadrature error estimate
    exceeds abs_tol + rel_tol |value|.
    """
    m = family.mass
    _check_energy(E, m)
    if isinstance(p, RGScale) and not E < p.mu:
        raise DomainError("flow prescription requires E < mu")

    n = len(family)
    entries = np.zeros((n, n))
    err = np.zeros((n, n))
    band = np.zeros(n)
    for i, curve in enumerate(family.curves):
        if isinstance(p, MinimalBoundState):
            v, e, b = _diag_integral(curve, E, float(family.mu[i]), m, manifold, cfg, "ren")
            inv_lambda = 0.0
        else:
            v, e, b = _diag_integral(curve, E, p.mu, m, manifold, cfg, "rg")
            inv_lambda = 1.0 / p.lambda_R
        entries[i, i] = inv_lambda + v
        err[i, i] = e
        band[i] = b
    for i in range(n):
        for j in range(i + 1, n):
            v, e = _offdiag_integral(family.curves[i], family.curves[j], E, m, manifold, cfg, "plain")
            entries[i, j] = entries[j, i] = v
            err[i, j] = err[j, i] = e

    worst = None
    for i in range(n):
        for j in range(n):
            tol = _entry_tolerance(entries[i, j], cfg)
            if err[i, j] > tol and (worst is None or err[i, j] > worst[1]):
                worst = ((i, j), err[i, j], tol)
    if worst is not None:
        raise ConvergenceError(
            f"entry {worst[0]} error estimate {worst[1]:.3e} exceeds tolerance {worst[2]:.3e}",
            worst[0], worst[1], worst[2],
        )
    return PrincipalMatrix(
        E=float(E),
        entries=entries,
        err=err,
        band_contributions=band,
        fingerprint=family_fingerprint(family, manifold),
    )


def derivative_matrix(
    family: CurveFamily,
    E: float,
    manifold: ManifoldSpec = Euclidean3(),
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> np.ndarray:
    """dPhi/dE, prescription independent: every entry is a negative integral
    of the (strictly positive) energy-derivative pair kernel."""
    m = family.mass
    _check_energy(E, m)
    n = len(family)
    out = np.zeros((n, n))
    for i, curve in enumerate(family.curves):
        v, _, _ = _diag_integral(curve, E, None, m, manifold, cfg, "deriv")
        out[i, i] = -v
    for i in range(n):
        for j in range(i + 1, n):
            v, _ = _offdiag_integral(family.curves[i], family.curves[j], E, m, manifold, cfg, "deriv")
            out[i, j] = out[j, i] = v  # _offdiag_integral already carries the minus sign
    return out


def rg_assemble(
    curve: SampledCurve,
    E: float,
    mu: float,
    lambda_R: float,
    manifold: ManifoldSpec = Euclidean3(),
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    m: float = 1.0,
) -> float:
    """Scalar flow-prescription principal value Phi_R(E) for one curve."""
    _check_energy(E, m)
    if not E < mu:
        raise DomainError("flow prescription requires E < mu")
    if not lambda_R > 0:
        raise DomainError("coupling must be positive")
    v, _, _ = _diag_integral(curve, E, mu, m, manifold, cfg, "rg")
    return 1.0 / lambda_R + v
