import math

import numpy as np
import pytest

from curvebound import Circle, Euclidean3, family_geometry, resample_arclength

EUCLID = Euclidean3()


def circle_family(separations, mus=None, radius=1.0, n=64, mass=1.0):
    """Congruent circles with centers spread along the x axis."""
    centers = [0.0]
    for s in separations:
        # center spacing = surface separation + 2 radii for x-offset circles
        centers.append(centers[-1] + s + 2.0 * radius)
    shapes = [Circle(center=(c, 0.0, 0.0), radius=radius, normal=(0.0, 0.0, 1.0))
              for c in centers]
    curves = [resample_arclength(s, n) for s in shapes]
    if mus is None:
        mus = [0.0] * len(curves)
    return family_geometry(curves, EUCLID, mus, mass=mass)


@pytest.fixture(scope="session")
def unit_circle():
    return resample_arclength(Circle(center=(0, 0, 0), radius=1.0, normal=(0, 0, 1)), 64)


@pytest.fixture(scope="session")
def single_family(unit_circle):
    return family_geometry([unit_circle], EUCLID, [0.0])


@pytest.fixture(scope="session")
def pair_family_d10():
    return circle_family([10.0])


@pytest.fixture(scope="session")
def pair_family_d30():
    return circle_family([30.0])


@pytest.fixture(scope="session")
def pair_family_d100():
    return circle_family([100.0])
