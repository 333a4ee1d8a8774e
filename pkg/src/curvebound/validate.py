"""Invariant suite behind the `validate` task.

Each check exercises one published property of the library on the configured
family (kernel anchors, operator structure, spectral monotonicity, bound
ordering, flow identities) and reports pass/fail/skip with a one-line detail.
Checks that only make sense on a flat ambient space are skipped elsewhere
rather than failed.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import k1

from .bounds import near_diagonal_envelope
from .config import RunConfig
from .curves import CurveFamily
from .manifolds import (
    Euclidean3,
    FlatTorus3,
    Hyperbolic3,
    circle_heat_kernel,
)
from .principal import MinimalBoundState, RGScale, assemble, derivative_matrix
from .quadrature import flat_resolvent_oracle, pair_kernel_plain, pair_kernel_renormalized
from .rgflow import beta, flow_coupling, rg_invariance_residual
from .spectrum import eigen_decompose, spectral_flow


def _probe_points(manifold, d):
    """Two manifold-valid points at coordinate separation d along axis 1."""
    if isinstance(manifold, Hyperbolic3):
        a = manifold.curvature_radius
        return np.array([0.0, 0.0, a]), np.array([d, 0.0, a])
    return np.zeros(3), np.array([d, 0.0, 0.0])


def _test_energy(family: CurveFamily, prescription) -> float:
    mu_ref = float(np.min(family.mu))
    if isinstance(prescription, RGScale):
        mu_ref = min(mu_ref, prescription.mu)
    return mu_ref - 0.3 * (mu_ref + family.mass)


def _check_yukawa(cfg: RunConfig):
    if not isinstance(cfg.manifold, Euclidean3):
        return "skip", "flat-space anchor; manifold is not Euclidean3"
    m = cfg.mass
    worst = 0.0
    for d in (0.5 / m, 1.0 / m, 3.0 / m):
        x, y = _probe_points(cfg.manifold, d)
        got = pair_kernel_plain(0.0, x, y, m, cfg.manifold, cfg.quadrature).value
        ref = math.exp(-m * d) / (8.0 * math.pi * d)
        worst = max(worst, abs(got - ref) / ref)
    status = "pass" if worst < 1e-8 else "fail"
    return status, f"max relative deviation from exp(-m d)/(8 pi d): {worst:.3e}"


def _check_oracle(cfg: RunConfig):
    if not isinstance(cfg.manifold, Euclidean3):
        return "skip", "resolvent oracle is flat-space only"
    m = cfg.mass
    worst = 0.0
    for e_frac in (-0.9, 0.0, 0.9):
        for d in (0.1 / m, 1.0 / m, 5.0 / m):
            x, y = _probe_points(cfg.manifold, d)
            got = pair_kernel_plain(e_frac * m, x, y, m, cfg.manifold, cfg.quadrature).value
            ref = flat_resolvent_oracle(e_frac * m, d, m)
            worst = max(worst, abs(got - ref) / ref)
    status = "pass" if worst < 1e-8 else "fail"
    return status, f"max relative gap to the direct resolvent integral: {worst:.3e}"


def _check_monotone_kernel(cfg: RunConfig):
    m = cfg.mass
    d = 1.0 / m
    x, y = _probe_points(cfg.manifold, d)
    grid = [-0.9 * m, -0.5 * m, 0.0, 0.5 * m, 0.9 * m]
    plain = [pair_kernel_plain(E, x, y, m, cfg.manifold, cfg.quadrature).value for E in grid]
    ren = [
        pair_kernel_renormalized(E, 0.95 * m, x, y, m, cfg.manifold, cfg.quadrature).value
        for E in grid
    ]
    ok = all(b > a for a, b in zip(plain, plain[1:])) and all(
        b < a for a, b in zip(ren, ren[1:])
    )
    return ("pass" if ok else "fail",
            "G_plain strictly increasing and G_ren strictly decreasing on the sample grid")


def _check_bessel_sandwich(cfg: RunConfig):
    for z in (0.1, 1.0, 10.0):
        val = k1(z)
        lo = math.exp(-z) / z
        hi = math.exp(-z) * (1.0 + 1.0 / z)
        if not lo < val < hi:
            return "fail", f"K1({z}) = {val} outside (e^-z/z, e^-z(1+1/z))"
    return "pass", "e^-z/z < K1(z) < e^-z (1 + 1/z) at z in {0.1, 1, 10}"


def _check_circle_semigroup(cfg: RunConfig):
    L = (cfg.manifold.circumferences[0] if isinstance(cfg.manifold, FlatTorus3) else 2.0 * math.pi)
    n = 4096
    eta = np.linspace(0.0, L, n, endpoint=False)
    worst = 0.0
    for u, v, xi in ((0.1 * L**2, 0.05 * L**2, 0.3 * L), (0.02 * L**2, 0.02 * L**2, 0.0)):
        conv = np.sum(circle_heat_kernel(u, xi - eta, L) * circle_heat_kernel(v, eta, L)) * L / n
        direct = circle_heat_kernel(u + v, xi, L)
        worst = max(worst, abs(conv - direct) / direct)
    return ("pass" if worst < 1e-8 else "fail",
            f"max relative semigroup defect of the circle kernel: {worst:.3e}")


def _check_poisson(cfg: RunConfig):
    from .manifolds import _circle_images, _circle_spectral

    L = (cfg.manifold.circumferences[0] if isinstance(cfg.manifold, FlatTorus3) else 2.0 * math.pi)
    u = np.array([L**2 / (4.0 * math.pi)])
    worst = 0.0
    for frac in (0.0, 0.17, 0.5):
        xi = np.array([frac * L])
        a = float(_circle_spectral(u, xi, L, 12)[0])
        b = float(_circle_images(u, xi, L, 12)[0])
        worst = max(worst, abs(a - b) / a)
    return ("pass" if worst < 1e-12 else "fail",
            f"mode-sum vs image-sum mismatch at the switch point: {worst:.3e}")


def _check_hermiticity(cfg: RunConfig, family, E_test):
    M = assemble(family, E_test, cfg.prescription, cfg.manifold, cfg.quadrature)
    sym = float(np.max(np.abs(M.entries - M.entries.T)))
    off = M.entries[~np.eye(len(family), dtype=bool)]
    ok = sym <= 1e-12 * max(1.0, float(np.max(np.abs(M.entries)))) and np.all(off <= 0)
    return ("pass" if ok else "fail",
            f"symmetry defect {sym:.3e}; off-diagonal entries all <= 0: {bool(np.all(off <= 0))}")


def _check_derivative_negativity(cfg: RunConfig, family, E_test):
    D = derivative_matrix(family, E_test, cfg.manifold, cfg.quadrature)
    rng = np.random.default_rng(20260816)
    worst = -math.inf
    for _ in range(20):
        v = rng.standard_normal(len(family))
        v /= np.linalg.norm(v)
        worst = max(worst, float(v @ D @ v))
    return ("pass" if worst < 0 else "fail",
            f"max quadratic form of dPhi/dE over 20 random directions: {worst:.3e}")


def _check_monotone_flow(cfg: RunConfig, family, E_test):
    m, mu_min = family.mass, float(np.min(family.mu))
    if isinstance(cfg.prescription, RGScale):
        mu_min = min(mu_min, cfg.prescription.mu)
    energies = np.linspace(-0.9 * m, mu_min - 0.05 * (mu_min + m), 5)
    flow = spectral_flow(family, energies, cfg.prescription, cfg.manifold, cfg.quadrature)
    diffs = np.diff(flow.eigenvalues, axis=0)
    ok = bool(np.all(diffs < 0))
    return ("pass" if ok else "fail",
            "every eigenvalue branch strictly decreasing over a 5-point energy grid" if ok
            else f"non-decreasing step found, max diff {float(np.max(diffs)):.3e}")


def _check_perron(cfg: RunConfig, family, E_test):
    M = assemble(family, E_test, cfg.prescription, cfg.manifold, cfg.quadrature)
    off = np.abs(M.entries[~np.eye(len(family), dtype=bool)])
    if len(family) > 1 and float(np.min(off)) < 1e-14:
        return "skip", "family numerically disconnected; lowest eigenvector need not be positive"
    _, vecs = eigen_decompose(M)
    v = vecs[:, 0]
    k = int(np.argmax(np.abs(v)))
    if v[k] < 0:
        v = -v
    ok = bool(np.all(v > 0))
    return ("pass" if ok else "fail",
            f"ground eigenvector strictly positive: min component {float(np.min(v)):.3e}")


def _check_band_envelope(cfg: RunConfig, family, E_test):
    if not isinstance(cfg.manifold, Euclidean3):
        return "skip", "envelope constants are calibrated for Euclidean3"
    M = assemble(family, E_test, cfg.prescription, cfg.manifold, cfg.quadrature)
    mus = (
        [cfg.prescription.mu] * len(family)
        if isinstance(cfg.prescription, RGScale)
        else [float(x) for x in family.mu]
    )
    worst = -math.inf
    for i, curve in enumerate(family.curves):
        env = near_diagonal_envelope(E_test, mus[i], family.mass,
                                     kappa_delta=curve.kappa_star * curve.delta_window)
        worst = max(worst, float(M.band_contributions[i]) - env)
    return ("pass" if worst <= 0 else "fail",
            f"max (band contribution - envelope) over curves: {worst:.3e}")


def _check_beta(cfg: RunConfig):
    lam = 1.0
    got = beta(lam, cfg=cfg.quadrature)
    ref = -lam * lam / (4.0 * math.pi)
    rel = abs(got - ref) / abs(ref)
    return ("pass" if rel < 1e-6 else "fail",
            f"quadrature beta vs -lambda^2/(4 pi): relative gap {rel:.3e}")


def _check_flow_semigroup(cfg: RunConfig):
    lam = 1.0
    worst = 0.0
    for t1, t2 in ((0.5, 0.8), (1.3, 2.0), (0.7, 1.9)):
        once = flow_coupling(lam, t1 * t2)
        twice = flow_coupling(flow_coupling(lam, t1), t2)
        worst = max(worst, abs(once - twice) / once)
    return ("pass" if worst < 1e-10 else "fail",
            f"max relative semigroup defect of the coupling flow: {worst:.3e}")


def _check_rg_invariance(cfg: RunConfig, family):
    if not isinstance(cfg.manifold, Euclidean3):
        return "skip", "rescaling identity is checked on Euclidean3 only"
    m = family.mass
    mu = cfg.prescription.mu if isinstance(cfg.prescription, RGScale) else 0.5 * m
    lam = cfg.prescription.lambda_R if isinstance(cfg.prescription, RGScale) else 1.0
    if not math.isfinite(lam):
        lam = 1.0
    E = -0.2 * m
    worst = 0.0
    for tau in (0.5, 2.0):
        if tau * abs(E) >= tau * m or tau * E >= mu:  # keep the scaled point subcritical
            return "skip", "scaled test energy leaves the valid window for this prescription"
        worst = max(worst, rg_invariance_residual(family.curves[0], E, m, mu, lam, tau,
                                                  cfg.quadrature))
    return ("pass" if worst < 1e-6 else "fail",
            f"max relative rescaling residual at tau in {{1/2, 2}}: {worst:.3e}")


def run_validation_suite(cfg: RunConfig) -> list:
    """Run every applicable invariant check; returns a list of result dicts."""
    family = cfg.build_family()
    E_test = _test_energy(family, cfg.prescription)

    named = [
        ("yukawa_anchor", lambda: _check_yukawa(cfg)),
        ("oracle_equivalence", lambda: _check_oracle(cfg)),
        ("kernel_monotonicity", lambda: _check_monotone_kernel(cfg)),
        ("bessel_sandwich", lambda: _check_bessel_sandwich(cfg)),
        ("circle_semigroup", lambda: _check_circle_semigroup(cfg)),
        ("poisson_duality", lambda: _check_poisson(cfg)),
        ("matrix_hermiticity", lambda: _check_hermiticity(cfg, family, E_test)),
        ("derivative_negativity", lambda: _check_derivative_negativity(cfg, family, E_test)),
        ("eigenvalue_monotonicity", lambda: _check_monotone_flow(cfg, family, E_test)),
        ("perron_positivity", lambda: _check_perron(cfg, family, E_test)),
        ("band_envelope", lambda: _check_band_envelope(cfg, family, E_test)),
        ("beta_closed_form", lambda: _check_beta(cfg)),
        ("flow_semigroup", lambda: _check_flow_semigroup(cfg)),
        ("rg_invariance", lambda: _check_rg_invariance(cfg, family)),
    ]
    report = []
    for name, fn in named:
        try:
            status, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            status, detail = "fail", f"raised {type(exc).__name__}: {exc}"
        report.append({"name": name, "status": status, "detail": detail})
    return report
