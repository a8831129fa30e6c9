import numpy as np
import pytest

from orliczgeo import Ball, Ellipsoid, VPolytope, build_grid, random_body


@pytest.fixture(scope="session")
def grid256():
    return build_grid(2, 256)


@pytest.fixture(scope="session")
def grid1024():
    return build_grid(2, 1024)


@pytest.fixture
def square():
    return VPolytope(np.array([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]))


@pytest.fixture
def triangle():
    return VPolytope(np.array([[2.0, -1.0], [-1.0, 2.0], [-1.0, -1.0]]))


@pytest.fixture
def ellipse():
    return Ellipsoid(np.array([[1.6, 0.3], [0.0, 1.0 / 1.6]]))


@pytest.fixture
def unit_ball():
    return Ball(1.0)


@pytest.fixture(scope="session")
def smooth_body(grid256):
    return random_body(2, 7, "smooth", grid256)
