import math

import numpy as np
import pytest

from orliczgeo import SphereGrid, build_grid, integrate
from orliczgeo.errors import DimensionMismatch, InvalidResolution, NonFiniteIntegrand
from orliczgeo.spheregrid import ball_volume, sphere_measure


@pytest.mark.parametrize("dim,total", [(2, 2 * math.pi), (3, 4 * math.pi)])
def test_weights_sum_to_sphere_measure(dim, total):
    g = build_grid(dim, 64)
    assert g.weights.sum() == pytest.approx(total, rel=1e-14)
    assert np.allclose(np.linalg.norm(g.nodes, axis=1), 1.0)


@pytest.mark.parametrize("dim,m", [(2, 3), (2, 2), (2, 7), (3, 6), (3, 9), (1, 16)])
def test_invalid_resolutions(dim, m):
    with pytest.raises(InvalidResolution):
        build_grid(dim, m)


@pytest.mark.parametrize("dim,m", [(2, 16), (3, 64), (4, 64)])
def test_grids_are_antipodal(dim, m):
    g = build_grid(dim, m)
    d = np.linalg.norm(g.nodes[:, None, :] + g.nodes[None, :, :], axis=2)
    assert np.all(d.min(axis=1) < 1e-12)
    assert np.allclose(g.weights @ g.nodes, 0.0, atol=1e-12)


def test_circle_quadrature_is_exact_for_low_trig_degree():
    g = build_grid(2, 32)
    th = g.angles
    for k in range(1, 31):
        assert abs(g.integrate(np.cos(k * th))) < 1e-12
    assert g.integrate(np.cos(th) ** 2) == pytest.approx(math.pi, rel=1e-14)


@pytest.mark.parametrize("m", [8, 64, 256])
def test_sphere_second_moments_exact_when_m_divisible_by_8(m):
    g = build_grid(3, m)
    M = (g.nodes * g.weights[:, None]).T @ g.nodes
    assert np.allclose(M, 4 * math.pi / 3 * np.eye(3), atol=1e-12)


def test_integrate_rejects_non_finite_and_wrong_length():
    g = build_grid(2, 8)
    with pytest.raises(NonFiniteIntegrand):
        integrate(g, np.r_[np.ones(7), np.nan])
    with pytest.raises(DimensionMismatch):
        integrate(g, np.ones(5))


def test_interpolation_reproduces_nodes_and_is_linear_between():
    g = build_grid(2, 16)
    vals = np.cos(g.angles) + 2.0
    assert np.allclose(g.interpolate(vals, g.nodes), vals)
    mid = np.array([[math.cos(math.pi / 16), math.sin(math.pi / 16)]])
    assert g.interpolate(vals, mid)[0] == pytest.approx(0.5 * (vals[0] + vals[1]))


def test_simplicial_interpolation_in_3d():
    g = build_grid(3, 64)
    vals = 1.0 + g.nodes[:, 2] ** 2
    assert np.allclose(g.interpolate(vals, g.nodes[:5]), vals[:5])


def test_dict_round_trip_is_bitwise():
    g = build_grid(3, 16)
    g2 = SphereGrid.from_dict(g.to_dict())
    assert g.same_as(g2)
    assert np.array_equal(g.nodes, g2.nodes)


def test_ball_volume_and_sphere_measure():
    assert ball_volume(2) == pytest.approx(math.pi)
    assert ball_volume(3) == pytest.approx(4 * math.pi / 3)
    for n in range(2, 7):
        assert sphere_measure(n) == pytest.approx(n * ball_volume(n))
