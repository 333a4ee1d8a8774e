import math

import numpy as np
import pytest

from curvebound import (
    DomainError,
    Euclidean3,
    FlatTorus3,
    Hyperbolic3,
    circle_heat_kernel,
    geodesic_distance,
    heat_kernel,
    volume,
)
from curvebound.manifolds import heat_kernel_grid, pair_displacement


def test_euclid_coincidence_value():
    v = heat_kernel(Euclidean3(), 1.0, np.zeros(3), np.zeros(3))
    assert v == pytest.approx((4.0 * math.pi) ** -1.5, rel=1e-14)


def test_euclid_closed_form():
    v = heat_kernel(Euclidean3(), 0.25, np.zeros(3), np.array([1.0, 0, 0]))
    assert v == pytest.approx(math.pi**-1.5 * math.exp(-1.0), rel=1e-14)


def test_torus_long_time_limit_is_inverse_volume():
    t = FlatTorus3((1.0, 1.0, 1.0))
    v = heat_kernel(t, 10.0, np.array([0.3, 0.1, 0.9]), np.array([0.7, 0.2, 0.4]))
    assert abs(v - 1.0) < 1e-10
    assert volume(t) == 1.0


def test_hyperbolic_closed_form():
    h = Hyperbolic3(1.0)
    x = np.array([0.0, 0.0, 1.0])
    y = np.array([0.0, 0.0, math.e])  # geodesic distance exactly 1
    ref = (4.0 * math.pi * 0.5) ** -1.5 * (1.0 / math.sinh(1.0)) * math.exp(-0.5 - 0.5)
    assert heat_kernel(h, 0.5, x, y) == pytest.approx(ref, rel=1e-14)


def test_hyperbolic_semigroup_frozen():
    # int_{H^3} K_.5(x,z) K_.5(z,y) dV(z) at geodesic separation 1, from an
    # independent 2D geodesic-polar integration (adaptive quadrature)
    h = Hyperbolic3(1.0)
    x = np.array([0.0, 0.0, 1.0])
    y = np.array([0.0, 0.0, math.e])
    assert heat_kernel(h, 1.0, x, y) == pytest.approx(5.472740776373e-03, rel=1e-10)


def test_distance_pythagorean():
    d = geodesic_distance(Euclidean3(), np.zeros(3), np.array([3.0, 4.0, 0.0]))
    assert d == pytest.approx(5.0, rel=1e-15)


def test_distance_torus_nearest_image():
    d = geodesic_distance(FlatTorus3((1, 1, 1)), np.zeros(3), np.array([0.9, 0.0, 0.0]))
    assert d == pytest.approx(0.1, rel=1e-12)


def test_distance_hyperbolic_vertical():
    d = geodesic_distance(Hyperbolic3(1.0), np.array([0, 0, 1.0]), np.array([0, 0, math.e]))
    assert d == pytest.approx(1.0, rel=1e-12)


def test_hyperbolic_distance_scales_with_radius():
    a = 2.5
    d = geodesic_distance(Hyperbolic3(a), np.array([0, 0, 1.0]), np.array([0, 0, math.e]))
    assert d == pytest.approx(a, rel=1e-12)


def test_circle_kernel_constant_mode():
    L = 2.0 * math.pi
    for xi in (0.0, 0.4 * L, 0.9 * L):
        assert abs(circle_heat_kernel(100.0 * L**2, xi, L) - 1.0 / L) < 1e-12


def test_circle_kernel_poisson_duality():
    from curvebound.manifolds import _circle_images, _circle_spectral

    L = 2.0 * math.pi
    u = np.array([L**2 / (4.0 * math.pi**2)])
    xi = np.array([L / 3.0])
    a = float(_circle_spectral(u, xi, L, 12)[0])
    b = float(_circle_images(u, xi, L, 12)[0])
    assert abs(a - b) / a < 1e-12


@pytest.mark.parametrize("u_frac", [0.01, 1.0, 100.0])
def test_circle_kernel_normalization(u_frac):
    L = 2.0 * math.pi
    n = 8192
    xi = np.linspace(0.0, L, n, endpoint=False)
    total = float(np.sum(circle_heat_kernel(u_frac * L**2, xi, L))) * L / n
    assert abs(total - 1.0) < 1e-10


def test_circle_kernel_semigroup():
    L = 2.0 * math.pi
    n = 4096
    eta = np.linspace(0.0, L, n, endpoint=False)
    u, v, xi = 0.03 * L**2, 0.11 * L**2, 0.27 * L
    conv = float(np.sum(circle_heat_kernel(u, xi - eta, L) * circle_heat_kernel(v, eta, L))) * L / n
    assert conv == pytest.approx(circle_heat_kernel(u + v, xi, L), rel=1e-10)


def test_torus_kernel_is_product_of_circles():
    t = FlatTorus3((1.0, 2.0, 3.0))
    x = np.array([0.1, 0.5, 2.0])
    y = np.array([0.8, 1.9, 0.3])
    u = 0.2
    got = heat_kernel(t, u, x, y)
    ref = 1.0
    for k, L in enumerate(t.circumferences):
        ref *= circle_heat_kernel(u, x[k] - y[k], L)
    assert got == pytest.approx(ref, rel=1e-13)


def test_heat_kernel_grid_matches_scalar():
    m = Hyperbolic3(1.3)
    xs = np.array([[0.0, 0.0, 1.0], [0.2, 0.1, 2.0], [0.0, 0.5, 0.7]])
    ys = np.array([[0.1, 0.0, 1.5], [0.0, 0.0, 1.0], [0.3, 0.2, 1.1]])
    disp = pair_displacement(m, xs, ys)
    grid = heat_kernel_grid(m, np.array([0.7]), disp)
    for k in range(3):
        assert grid[0, k] == pytest.approx(heat_kernel(m, 0.7, xs[k], ys[k]), rel=1e-13)


def test_domain_errors():
    with pytest.raises(DomainError):
        heat_kernel(Euclidean3(), 0.0, np.zeros(3), np.zeros(3))
    with pytest.raises(DomainError):
        heat_kernel(Hyperbolic3(1.0), 1.0, np.array([0, 0, -1.0]), np.array([0, 0, 1.0]))
    with pytest.raises(DomainError):
        FlatTorus3((1.0, -1.0, 1.0))
    with pytest.raises(DomainError):
        Hyperbolic3(0.0)
    with pytest.raises(DomainError):
        circle_heat_kernel(-0.1, 0.0, 2.0 * math.pi)
