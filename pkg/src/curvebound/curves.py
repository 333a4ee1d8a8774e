"""Closed curves embedded in the model manifolds.

Shapes are exact descriptions (circle, closed polyline, torus winding line);
``resample_arclength`` turns one into a ``SampledCurve``: uniform arc-length
nodes with periodic-trapezoid weights plus the derived geometry the solver
needs (length, curvature bound, near-diagonal window, self-distance).

The window half-width delta = min(1/(4 kappa*), L/8) keeps kappa* delta <= 1/4,
so inside the window the chord obeys  sqrt(1 - kappa* delta) xi <= d <= xi.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .manifolds import (
    DomainError,
    Euclidean3,
    FlatTorus3,
    Hyperbolic3,
    ManifoldSpec,
    geodesic_distance,
    pair_displacement,
    displacement_distance,
)


class ValidationError(ValueError):
    """Geometry that fails a structural check (self-intersection, degeneracy)."""


@dataclass(frozen=True)
class Circle:
    center: tuple[float, float, float]
    radius: float
    normal: tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if self.radius <= 0:
            raise ValidationError("circle radius must be positive")
        if not np.all(np.isfinite(self.center)) or not np.all(np.isfinite(self.normal)):
            raise ValidationError("circle center/normal must be finite")
        if np.linalg.norm(self.normal) == 0:
            raise ValidationError("circle normal must be nonzero")


@dataclass(frozen=True)
class ParametricSamples:
    """Closed polyline through ordered points (closing edge implied)."""

    points: tuple  # sequence of 3-vectors

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 3:
            raise ValidationError("need at least three 3d points")
        if not np.all(np.isfinite(pts)):
            raise ValidationError("polyline points must be finite")


@dataclass(frozen=True)
class TorusLoop:
    """Closed geodesic on a flat torus with winding numbers (p, q, r)."""

    winding: tuple[int, int, int]
    offset: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        w = self.winding
        if len(w) != 3 or any(int(v) != v for v in w):
            raise ValidationError("winding numbers must be three integers")
        if all(v == 0 for v in w):
            raise ValidationError("winding numbers must not all vanish")
        if math.gcd(*(abs(int(v)) for v in w)) != 1:
            raise ValidationError("winding numbers with gcd > 1 retrace the same loop")


CurveSpec = Union[Circle, ParametricSamples, TorusLoop]


# ---------------------------------------------------------------------------
# arc-length evaluators


class _CircleEval:
    def __init__(self, center, radius, normal):
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        n = np.asarray(normal, dtype=float)
        n = n / np.linalg.norm(n)
        helper = np.zeros(3)
        helper[int(np.argmin(np.abs(n)))] = 1.0
        e1 = helper - np.dot(helper, n) * n
        self.e1 = e1 / np.linalg.norm(e1)
        self.e2 = np.cross(n, self.e1)
        self.length = 2.0 * math.pi * self.radius

    def __call__(self, s):
        theta = np.asarray(s, dtype=float) / self.radius
        return (
            self.center[None, :]
            + self.radius * np.cos(theta)[:, None] * self.e1[None, :]
            + self.radius * np.sin(theta)[:, None] * self.e2[None, :]
        )

    def rescaled(self, f):
        return _CircleEval(self.center * f, self.radius * f, np.cross(self.e1, self.e2))


class _PolylineEval:
    def __init__(self, pts):
        pts = np.asarray(pts, dtype=float)
        closed = np.vstack([pts, pts[:1]])
        seg = np.linalg.norm(np.diff(closed, axis=0), axis=1)
        if np.any(seg == 0):
            raise ValidationError("polyline has coincident consecutive points")
        self.breaks = np.concatenate([[0.0], np.cumsum(seg)])
        self.closed = closed
        self.length = float(self.breaks[-1])

    def __call__(self, s):
        s = np.mod(np.asarray(s, dtype=float), self.length)
        return np.stack(
            [np.interp(s, self.breaks, self.closed[:, i]) for i in range(3)], axis=1
        )

    def rescaled(self, f):
        return _PolylineEval(self.closed[:-1] * f)


class _AffineEval:
    def __init__(self, offset, direction):
        self.offset = np.asarray(offset, dtype=float)
        self.direction = np.asarray(direction, dtype=float)
        self.length = float(np.linalg.norm(direction))

    def __call__(self, s):
        t = np.asarray(s, dtype=float)[:, None] / self.length
        return self.offset[None, :] + t * self.direction[None, :]

    def rescaled(self, f):
        return _AffineEval(self.offset * f, self.direction * f)


@dataclass(frozen=True, eq=False)
class SampledCurve:
    """Arc-length sampled closed curve with derived geometry."""

    nodes: np.ndarray
    points: np.ndarray
    weights: np.ndarray
    length: float
    kappa_star: float
    delta_window: float
    self_distance: float
    homogeneous: bool = False
    window_resolved: bool = True
    evaluator: object = field(repr=False, default=None)

    def point_at(self, s):
        """Embedded coordinates at arc positions s (vectorized)."""
        return self.evaluator(np.atleast_1d(s))

    def rescaled(self, factor: float) -> "SampledCurve":
        """The same curve with every length scaled by factor (flat backends)."""
        if factor <= 0:
            raise DomainError("scale factor must be positive")
        kappa = self.kappa_star / factor
        return SampledCurve(
            nodes=self.nodes * factor,
            points=self.points * factor,
            weights=self.weights * factor,
            length=self.length * factor,
            kappa_star=kappa,
            delta_window=self.delta_window * factor,
            self_distance=self.self_distance * factor,
            homogeneous=self.homogeneous,
            window_resolved=self.window_resolved,
            evaluator=self.evaluator.rescaled(factor),
        )


def _menger_curvature(points, manifold):
    """Largest three-point (circumradius) curvature over consecutive triples."""
    n = points.shape[0]
    a = points
    b = np.roll(points, -1, axis=0)
    c = np.roll(points, -2, axis=0)
    la = displacement_distance(manifold, pair_displacement(manifold, a, b))
    lb = displacement_distance(manifold, pair_displacement(manifold, b, c))
    lc = displacement_distance(manifold, pair_displacement(manifold, c, a))
    # Heron via Kahan's stable ordering
    s = np.sort(np.stack([la, lb, lc]), axis=0)
    x, y, z = s[0], s[1], s[2]
    arg = (x + (y + z)) * (z - (y - x)) * (z + (y - x)) * (x + (y - z))
    arg = np.maximum(arg, 0.0)
    area = 0.25 * np.sqrt(arg)
    kappa = 4.0 * area / (la * lb * lc)
    return float(np.max(kappa))


def _segment_pair_min_distance(p1, q1, p2, q2):
    """Minimum distance between segments [p1,q1] and [p2,q2] (flat)."""
    d1 = q1 - p1
    d2 = q2 - p2
    r = p1 - p2
    a = np.dot(d1, d1)
    e = np.dot(d2, d2)
    f = np.dot(d2, r)
    c = np.dot(d1, r)
    b = np.dot(d1, d2)
    denom = a * e - b * b
    s = np.clip((b * f - c * e) / denom, 0.0, 1.0) if denom > 1e-30 else 0.0
    t = (b * s + f) / e
    if t < 0.0:
        t = 0.0
        s = np.clip(-c / a, 0.0, 1.0)
    elif t > 1.0:
        t = 1.0
        s = np.clip((b - c) / a, 0.0, 1.0)
    return float(np.linalg.norm((p1 + s * d1) - (p2 + t * d2)))


def _check_polyline_embedding(pts, length):
    """Reject polylines whose non-adjacent segments touch."""
    n = pts.shape[0]
    closed = np.vstack([pts, pts[:1]])
    floor = 1e-9 * length
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue  # shares the closing vertex
            d = _segment_pair_min_distance(closed[i], closed[i + 1], closed[j], closed[j + 1])
            if d < floor:
                raise ValidationError(
                    f"polyline self-intersects near segments {i} and {j}"
                )


def resample_arclength(
    spec: CurveSpec, n: int, manifold: ManifoldSpec = Euclidean3()
) -> SampledCurve:
    """Uniform arc-length sampling of a curve shape.

    Returns n nodes with periodic-trapezoid weights (each L/n, summing to L),
    the exact or discretely estimated curvature bound kappa*, the
    near-diagonal window half-width delta and the off-window self-distance.

    A warning is issued when fewer than 4 nodes span the delta window; the
    band quadrature does not rely on node spacing, but geometry estimates do.
    """
    if n < 8:
        raise DomainError("need at least 8 sample nodes")

    if isinstance(spec, Circle):
        ev = _CircleEval(spec.center, spec.radius, spec.normal)
        kappa, homogeneous, exact_kappa = 1.0 / spec.radius, True, True
    elif isinstance(spec, ParametricSamples):
        pts = np.asarray(spec.points, dtype=float)
        ev = _PolylineEval(pts)
        _check_polyline_embedding(pts, ev.length)
        kappa, homogeneous, exact_kappa = None, False, False
    elif isinstance(spec, TorusLoop):
        if not isinstance(manifold, FlatTorus3):
            raise DomainError("TorusLoop requires a FlatTorus3 manifold")
        ls = manifold.circumferences
        direction = np.array([spec.winding[i] * ls[i] for i in range(3)], dtype=float)
        ev = _AffineEval(spec.offset, direction)
        kappa, homogeneous, exact_kappa = 0.0, True, True
    else:
        raise DomainError(f"unknown curve shape {type(spec).__name__}")

    L = ev.length
    s_nodes = np.arange(n) * (L / n)
    points = ev(s_nodes)
    weights = np.full(n, L / n)

    if not exact_kappa:
        kappa = 1.1 * _menger_curvature(points, manifold)  # 10% safety margin

    delta = L / 8.0 if kappa == 0.0 else min(1.0 / (4.0 * kappa), L / 8.0)

    # self-distance: closest approach among node pairs separated by more
    # than delta in arc length
    i, j = np.triu_indices(n, k=1)
    arc = np.abs(s_nodes[i] - s_nodes[j])
    arc = np.minimum(arc, L - arc)
    disp = pair_displacement(manifold, points[i], points[j])
    dist = displacement_distance(manifold, disp)
    outside = arc > delta
    self_dist = float(np.min(dist[outside])) if np.any(outside) else math.inf
    if np.any(dist[arc > 1e-9 * L] < 1e-9 * L):
        raise ValidationError("distinct arc positions collapse to one point")

    # chord window check on flat backends: sqrt(1-kappa*delta) xi <= d <= xi
    if not isinstance(manifold, Hyperbolic3):
        inside = (arc <= delta) & (arc > 0)
        if np.any(inside):
            xi = arc[inside]
            d_in = dist[inside]
            lo = math.sqrt(max(1.0 - kappa * delta, 0.0))
            if np.any(d_in > xi * (1.0 + 1e-9)) or np.any(d_in < lo * xi * (1.0 - 1e-9)):
                raise ValidationError("chord-window inequality violated in delta band")

    resolved = (delta / (L / n)) >= 4.0
    if not resolved and not exact_kappa:
        warnings.warn(
            f"only {delta / (L / n):.1f} nodes per delta window (< 4); "
            "increase the sample count for trustworthy geometry estimates",
            stacklevel=2,
        )

    return SampledCurve(
        nodes=s_nodes,
        points=points,
        weights=weights,
        length=L,
        kappa_star=float(kappa),
        delta_window=float(delta),
        self_distance=self_dist,
        homogeneous=homogeneous,
        window_resolved=resolved,
        evaluator=ev,
    )


@dataclass(frozen=True, eq=False)
class CurveFamily:
    """Disjoint closed curves with binding parameters and pair separations."""

    curves: tuple
    mu: np.ndarray
    d_matrix: np.ndarray
    mass: float = 1.0

    def __len__(self):
        return len(self.curves)


def family_geometry(
    curves: Sequence[SampledCurve],
    manifold: ManifoldSpec,
    mu: Sequence[float],
    mass: float = 1.0,
) -> CurveFamily:
    """Bundle sampled curves into a family, computing pairwise separations.

    d_ij is the brute-force minimum geodesic distance over sample-node pairs.
    Requires |mu_i| < mass and strictly positive separations (disjointness).
    """
    curves = tuple(curves)
    mu = np.asarray(mu, dtype=float)
    if mass <= 0:
        raise DomainError("mass must be positive")
    if len(mu) != len(curves):
        raise DomainError("one binding parameter per curve required")
    if np.any(np.abs(mu) >= mass):
        raise DomainError("binding parameters must satisfy |mu_i| < mass")
    n = len(curves)
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            pi, pj = curves[i].points, curves[j].points
            ii, jj = np.meshgrid(np.arange(len(pi)), np.arange(len(pj)), indexing="ij")
            disp = pair_displacement(manifold, pi[ii.ravel()], pj[jj.ravel()])
            dij = float(np.min(displacement_distance(manifold, disp)))
            if dij <= 0:
                raise ValidationError(f"curves {i} and {j} are not disjoint")
            d[i, j] = d[j, i] = dij
    return CurveFamily(curves=curves, mu=mu, d_matrix=d, mass=float(mass))
