import math

import numpy as np
import pytest

from orliczgeo import (
    Ball,
    Ellipsoid,
    OptimizerOptions,
    OrliczFunction,
    StarBody,
    affine_orlicz,
    affine_orlicz_multi,
    ball_functional,
    build_grid,
    ellipsoid_closed_form,
    geominimal_orlicz,
    ith_mixed,
    lp_affine_closed_form,
    lp_reference,
    random_sl,
    v_phi,
    v_phi_polar,
)
from orliczgeo.errors import MixedClassConflict, PEqualsMinusN, UnclassifiedPhi, UnsupportedDimension

P = OrliczFunction.power
FAST = OptimizerOptions(restarts=2)


def test_ball_values_match_closed_form():
    for r in (0.7, 1.0, 1.5):
        for phi in (P(2), P(-1), OrliczFunction.arctan_inv_n()):
            want = ball_functional(phi, r, 2)
            assert affine_orlicz(Ball(r), phi, build_grid(2, 128)).value == pytest.approx(want, rel=1e-12)
            g = geominimal_orlicz(Ball(r), phi, build_grid(2, 128), FAST).value
            assert g == pytest.approx(want, rel=1e-3)


def test_ellipse_affine_is_exact(ellipse, grid1024):
    for phi in (P(2), P(-1), OrliczFunction.log1p_inv_n()):
        r = affine_orlicz(ellipse, phi, grid1024)
        assert r.value == pytest.approx(ellipsoid_closed_form(ellipse, phi), rel=1e-12)
        assert r.flags == ()


def test_polytope_affine_is_degenerate(square):
    r = affine_orlicz(square, P(2))
    assert "Degenerate" in r.flags and r.value == 0.0 and r.flagged
    r = affine_orlicz(square, P(-1))
    assert "Diverging" in r.flags and math.isinf(r.value)
    r = affine_orlicz(square, OrliczFunction.arctan_inv_n())
    assert "Degenerate" in r.flags
    assert r.value == pytest.approx(2 * square.volume() * math.pi / 2)


def test_constant_phi_is_exact(square, smooth_body):
    for K in (square, smooth_body):
        for fn in (affine_orlicz, geominimal_orlicz):
            r = fn(K, OrliczFunction.constant(3.0))
            assert r.value == pytest.approx(3.0 * 2 * K.volume())
            assert r.flags == ("Exact",)


def test_class_errors(smooth_body):
    with pytest.raises(UnclassifiedPhi):
        affine_orlicz(smooth_body, OrliczFunction.custom(lambda t: np.exp(-t), "e"))
    with pytest.raises(MixedClassConflict):
        affine_orlicz_multi([smooth_body, smooth_body], [P(2), P(-1)])
    with pytest.raises(PEqualsMinusN):
        lp_affine_closed_form(smooth_body, -2)


def test_geominimal_needs_exact_polar_volumes():
    K = Ball(1.0, dim=4)
    with pytest.raises(UnsupportedDimension):
        geominimal_orlicz(K, P(2))


def test_affine_value_is_the_discrete_optimum(smooth_body):
    """No random star body beats the stationarity solution."""
    g = smooth_body.grid
    rng = np.random.default_rng(0)
    for phi, sign in ((P(2), 1), (P(-1), -1)):
        best = affine_orlicz(smooth_body, phi).value
        for _ in range(20):
            rho = np.exp(0.2 * rng.standard_normal(g.size))
            L = StarBody(g, rho)
            L = L.scaled(1.0 / L.vrad())
            val = 2 * v_phi_polar(smooth_body, L, phi, g).value
            assert sign * (val - best) >= -1e-12 * best


def test_geominimal_witness_reproduces_value(smooth_body):
    r = geominimal_orlicz(smooth_body, P(2), opts=FAST)
    Q = r.witness
    assert Q.polar().volume() == pytest.approx(math.pi, rel=1e-9)
    assert 2 * v_phi(smooth_body, Q, P(2)).value == pytest.approx(r.value, rel=1e-9)


def test_comparison_by_seeding(smooth_body):
    for phi in (P(2), P(-1)):
        g = geominimal_orlicz(smooth_body, phi, opts=FAST)
        a = affine_orlicz(smooth_body, phi, seed_witness=g)
        if g.direction == "inf":
            assert a.value <= g.value * (1 + 1e-10)
        else:
            assert a.value >= g.value * (1 - 1e-10)


def test_certified_sides():
    K = Ball(1.0)
    assert affine_orlicz(K, P(2)).certified_side == "upper_bound"
    assert affine_orlicz(K, P(-1)).certified_side == "lower_bound"


def test_affine_invariance_of_both_functionals(smooth_body):
    TK = smooth_body.apply_sl(random_sl(2, 11))
    a, b = affine_orlicz(smooth_body, P(2)).value, affine_orlicz(TK, P(2)).value
    assert b == pytest.approx(a, rel=1e-6)
    ga = geominimal_orlicz(smooth_body, P(2), opts=FAST).value
    gb = geominimal_orlicz(TK, P(2), opts=FAST).value
    assert gb == pytest.approx(ga, rel=1e-2)


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0, -1.0])
def test_lp_reference_matches_closed_form(smooth_body, p):
    assert lp_reference(smooth_body, p) == pytest.approx(lp_affine_closed_form(smooth_body, p), rel=1e-9)


def test_restarts_are_reproducible_and_thread_independent(smooth_body, monkeypatch):
    opts = OptimizerOptions(restarts=3, seed=5)
    a = geominimal_orlicz(smooth_body, P(-1), opts=opts)
    b = geominimal_orlicz(smooth_body, P(-1), opts=opts)
    monkeypatch.setenv("ORLICZ_THREADS", "3")
    c = geominimal_orlicz(smooth_body, P(-1), opts=opts)
    assert a.value == b.value == c.value
    assert a.trace["restart_values"] == c.trace["restart_values"]


def test_ith_mixed_endpoints(smooth_body, grid256):
    L = Ellipsoid(np.array([[1.2, 0.1], [0.0, 1 / 1.2]]))
    phi1, phi2 = P(-1), OrliczFunction.arctan_inv_n()
    v0 = ith_mixed(smooth_body, L, phi1, phi2, 0, "affine", grid256).value
    v2 = ith_mixed(smooth_body, L, phi1, phi2, 2, "affine", grid256).value
    assert v0 == pytest.approx(affine_orlicz(smooth_body, phi1, grid256).value, rel=1e-6)
    assert v2 == pytest.approx(affine_orlicz(L, phi2, grid256).value, rel=1e-6)


def test_result_serializes(smooth_body):
    d = geominimal_orlicz(smooth_body, P(2), opts=FAST).to_dict()
    assert d["quantity"] == "geominimal" and d["witness"][0]["kind"] == "hpolytope"
