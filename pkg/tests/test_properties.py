"""Randomized invariants over polygons, exponents and witnesses."""

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from orliczgeo import (
    OrliczFunction,
    StarBody,
    VPolytope,
    affine_orlicz,
    build_grid,
    random_body,
    v_p,
    v_phi,
    v_phi_polar,
)

P = OrliczFunction.power
G = build_grid(2, 256)
SMOOTH = random_body(2, 11, "smooth", G)

PROFILE = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def polygons(draw):
    k = draw(st.integers(3, 9))
    gaps = draw(st.lists(st.floats(0.2, 1.0), min_size=k, max_size=k))
    radii = draw(st.lists(st.floats(0.4, 2.0), min_size=k, max_size=k))
    # angle gaps below pi keep the origin strictly inside
    ang = np.cumsum(np.asarray(gaps) / sum(gaps) * 2 * math.pi)
    if np.max(np.diff(np.concatenate([ang, [ang[0] + 2 * math.pi]]))) >= math.pi * 0.95:
        ang = np.linspace(0, 2 * math.pi, k, endpoint=False)
    pts = np.c_[np.cos(ang), np.sin(ang)] * np.asarray(radii)[:, None]
    return VPolytope(pts)


exponents = st.floats(-3.0, 4.0).filter(lambda p: abs(p) > 1e-3)


@PROFILE
@given(polygons(), exponents)
def test_v_phi_of_body_with_itself_is_volume(K, p):
    assert v_phi(K, K, P(p)).value == pytest.approx(K.volume(), rel=1e-10)


@PROFILE
@given(polygons(), polygons(), st.floats(-0.2, 0.2), st.floats(-0.2, 0.2))
def test_v_1_translation_invariance(K, Q, dx, dy):
    a = v_p(K, Q, 1.0)
    b = v_p(K, Q.translate([dx, dy]), 1.0)
    assert b == pytest.approx(a, rel=1e-10)


@PROFILE
@given(polygons())
def test_polar_is_an_involution(K):
    back = K.polar().polar()
    u = G.nodes
    assert np.allclose(back.support(u), K.support(u), rtol=1e-10)


@PROFILE
@given(polygons(), st.floats(0.3, 3.0))
def test_v_phi_power_scales_with_q(K, lam):
    small = v_phi(K, K, P(2)).value
    big = v_phi(K, VPolytope(lam * K.vertices), P(2)).value
    assert big == pytest.approx(lam**2 * small, rel=1e-10)


@PROFILE
@given(st.floats(0.05, 20.0), st.sampled_from([P(2), P(0.5), P(-1), P(-4), OrliczFunction.arctan_inv_n()]))
def test_inverse_round_trip(t, phi):
    assert float(phi.inverse(phi(t))) == pytest.approx(t, rel=1e-8)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.05, 0.5), st.sampled_from([2.0, 1.0, -1.0, -0.5]))
def test_no_star_body_beats_the_affine_optimum(seed, scale, p):
    phi = P(p)
    best = affine_orlicz(SMOOTH, phi).value
    rng = np.random.default_rng(seed)
    L = StarBody(SMOOTH.grid, np.exp(scale * rng.standard_normal(SMOOTH.grid.size)))
    L = L.scaled(1.0 / L.vrad())
    val = 2 * v_phi_polar(SMOOTH, L, phi).value
    sign = 1 if p > 0 else -1  # inf for Phi, sup for Psi
    assert sign * (val - best) >= -1e-10 * best
