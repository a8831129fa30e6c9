import itertools
import math

import numpy as np
import pytest

from orliczgeo import (
    Ball,
    Ellipsoid,
    OrliczFunction,
    StarBody,
    VPolytope,
    random_body,
    s_phi,
    v_p,
    v_phi,
    v_phi_ith,
    v_phi_multi,
    v_phi_polar,
)
from orliczgeo.errors import RangeError
from oracle import POLYGONS, SCALAR_PHIS, oracle_v_phi

P = OrliczFunction.power


@pytest.mark.parametrize("Kv,Qv", list(itertools.permutations(POLYGONS, 2)))
@pytest.mark.parametrize("phi,scalar", SCALAR_PHIS, ids=[p.label for p, _ in SCALAR_PHIS])
def test_v_phi_matches_facet_sum_oracle(Kv, Qv, phi, scalar):
    K, Q = VPolytope(np.array(Kv)), VPolytope(np.array(Qv))
    got = v_phi(K, Q, phi).value
    want = oracle_v_phi(Kv, Qv, scalar)
    assert abs(got - want) <= 1e-12 * abs(want)


def test_v_phi_oracle_in_3d():
    cube = VPolytope(np.array([[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)], float))
    octa = VPolytope(np.vstack([np.eye(3), -np.eye(3)]) * 1.5)
    # cube facets: normals +-e_i, area 4, h_K = 1; h_octa(e_i) = 1.5
    want = sum(4.0 * 1.5**2 for _ in range(6)) / 3.0
    assert v_phi(cube, octa, P(2)).value == pytest.approx(want, rel=1e-12)


def test_constant_phi_gives_volume(triangle, ellipse, smooth_body):
    for K in (triangle, ellipse, smooth_body):
        r = v_phi(K, Ball(1.0), OrliczFunction.constant(1.0))
        assert r.value == pytest.approx(K.volume(), rel=1e-10)


def test_v_phi_of_body_with_itself(triangle, smooth_body):
    for K in (triangle, smooth_body):
        assert v_phi(K, K, P(3)).value == pytest.approx(K.volume(), rel=1e-10)


def test_polar_form_agrees_with_support_form(triangle):
    L = VPolytope(np.array(POLYGONS[1]))
    a = v_phi_polar(triangle, L, P(2)).value
    b = v_phi(triangle, L.polar(), P(2)).value
    assert a == pytest.approx(b, rel=1e-12)


@pytest.mark.parametrize("p", [-1.5, 0.5, 1.0, 2.0, 3.0])
def test_v_p_homogeneity(p, triangle, ellipse, smooth_body):
    lam = 1.7
    Q = VPolytope(np.array(POLYGONS[1]))
    for K in (triangle, ellipse):
        base = v_p(K, Q, p)
        scaledQ = v_p(K, VPolytope(lam * Q.vertices), p)
        assert abs(scaledQ - lam**p * base) <= 1e-10 * abs(base)
    K = smooth_body
    base = v_p(K, Q, p)
    from orliczgeo import SmoothSampled
    lamK = SmoothSampled(K.grid, lam * K.h, lam * K.f)
    assert abs(v_p(lamK, Q, p) - lam ** (2 - p) * base) <= 1e-10 * abs(base)


def test_v_1_is_translation_invariant_in_q(triangle):
    Q = np.array(POLYGONS[2])
    a = v_p(triangle, VPolytope(Q), 1.0)
    b = v_p(triangle, VPolytope(Q + np.array([0.2, -0.1])), 1.0)
    assert a == pytest.approx(b, rel=1e-12)


def test_s_phi_of_balls():
    for r in (0.5, 1.0, 2.0):
        assert s_phi(Ball(r), P(2)) == pytest.approx(2 * math.pi * r * r**-2 * r, rel=1e-12)


def test_non_positive_kernel_raises(triangle):
    phi = OrliczFunction.custom(lambda t: t - 0.9, "shifted")
    with pytest.raises(RangeError):
        v_phi(triangle, Ball(0.1), phi)


def test_multi_kernel_with_equal_factors_is_single_kernel(smooth_body, ellipse):
    Q = Ball(1.3)
    a = v_phi_multi([smooth_body, smooth_body], [Q, Q], [P(2), P(2)]).value
    assert a == pytest.approx(v_phi(smooth_body, Q, P(2)).value, rel=1e-12)


def test_ith_kernel_endpoints_and_symmetry(smooth_body, ellipse, grid256):
    K, L = smooth_body, ellipse
    Q1, Q2 = Ball(1.1), Ellipsoid(np.diag([1.2, 0.9]))
    phi1, phi2 = P(-1), OrliczFunction.arctan_inv_n()
    v0 = v_phi_ith(K, L, Q1, Q2, phi1, phi2, 0, grid=grid256).value
    v2 = v_phi_ith(K, L, Q1, Q2, phi1, phi2, 2, grid=grid256).value
    assert v0 == pytest.approx(v_phi(K, Q1, phi1, grid256).value, rel=1e-10)
    assert v2 == pytest.approx(v_phi(L, Q2, phi2, grid256).value, rel=1e-10)
    for i in (-1.0, 0.5, 1.0, 3.0):
        a = v_phi_ith(K, L, Q1, Q2, phi1, phi2, i, grid=grid256).value
        b = v_phi_ith(L, K, Q2, Q1, phi2, phi1, 2 - i, grid=grid256).value
        assert abs(a - b) <= 1e-8 * abs(a)


def test_ith_kernel_holder_chain(smooth_body, ellipse, grid256):
    K, L = smooth_body, ellipse
    Q1, Q2 = Ball(1.1), Ellipsoid(np.diag([1.2, 0.9]))
    V = lambda i: v_phi_ith(K, L, Q1, Q2, P(2), P(1), i, grid=grid256).value  # noqa: E731
    for i, j, k in [(0, 1, 2), (-1, 0.5, 2), (0, 2, 3), (-2, -1, 1)]:
        assert V(j) ** (k - i) <= V(i) ** (k - j) * V(k) ** (j - i) * (1 + 1e-8)


def test_polar_star_body_kernel(grid256, smooth_body):
    L = StarBody(grid256, np.full(256, 1.0))
    a = v_phi_polar(smooth_body, L, P(2), grid256).value
    b = v_phi(smooth_body, Ball(1.0), P(2), grid256).value
    assert a == pytest.approx(b, rel=1e-12)
