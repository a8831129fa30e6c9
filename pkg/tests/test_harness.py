import json
import math

import numpy as np
import pytest

from orliczgeo import Ellipsoid, OptimizerOptions, OrliczFunction, golden_corpus, run_suite
from orliczgeo.errors import ClassMismatch, UnknownSuite
from orliczgeo.harness import SUITES, Bound, _case, _margin, equality_witness, exact

P = OrliczFunction.power
FAST = OptimizerOptions(restarts=2)


def test_bound_side_algebra():
    up, lo, ex = Bound(2.0, "upper"), Bound(3.0, "lower"), exact(5.0)
    assert (up * ex).side == "upper"
    assert (up * up).side == "upper"
    assert (up * lo).side == "none"
    assert (up ** 2).side == "upper"
    assert (up ** -1).side == "lower"
    assert up.scaled(-1).side == "lower"
    assert up.mapped(math.log, increasing=True).side == "upper"
    assert up.mapped(lambda y: 1 / y, increasing=False).side == "lower"


def test_margin_signs_and_infinities():
    assert _margin(1.0, "<=", 2.0) == pytest.approx(0.5)
    assert _margin(2.0, "<=", 1.0) == pytest.approx(-0.5)
    assert _margin(1.0, ">=", 2.0) == pytest.approx(-0.5)
    assert _margin(1.0, "<=", math.inf) == 1.0
    assert _margin(math.inf, "<=", math.inf) == 0.0
    assert math.isnan(_margin(math.nan, "<=", 1.0))


@pytest.mark.parametrize(
    "lhs,rel,rhs,status",
    [
        (Bound(1.0, "upper"), "<=", exact(2.0), "Certified"),
        (Bound(1.0, "lower"), "<=", exact(2.0), "Inconclusive"),
        (Bound(2.0, "upper"), "<=", Bound(1.0, "lower"), "Violated"),
        (Bound(1.005, "exact"), "<=", exact(1.0), "Certified"),
        (Bound(1.0, "lower"), ">=", Bound(0.5, "upper"), "Certified"),
        (Bound(1.0, "upper"), ">=", Bound(0.5, "upper"), "Inconclusive"),
        (exact(1.0), "==", exact(1.02), "Violated"),
        (exact(1.0), "==", Bound(1.005, "none"), "Certified"),
    ],
)
def test_case_status(lhs, rel, rhs, status):
    c = _case(["k"], ["phi"], "claim", lhs, rel, rhs, 0.01)
    assert c.status == status
    if status == "Certified" and rel != "==" and c.margin < 0:
        assert "within tolerance" in c.notes


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("no-such-suite")
    with pytest.raises(UnknownSuite):
        equality_witness("lp-consistency")


def test_class_mismatches():
    E = [("e", Ellipsoid(np.eye(2)))]
    with pytest.raises(ClassMismatch):
        run_suite("comparison", corpus=E, phis=[OrliczFunction.constant(2)], opts=FAST)
    with pytest.raises(ClassMismatch):
        run_suite("monotonicity-phi", corpus=E, phis=[P(2), P(-1)], opts=FAST)
    with pytest.raises(ClassMismatch):
        run_suite("alexander-fenchel", corpus=E, phis=[P(2)], opts=FAST)
    with pytest.raises(ClassMismatch):
        run_suite("lp-consistency", corpus=E, phis=[OrliczFunction.arctan_inv_n()], opts=FAST)


def test_golden_corpus_shape():
    c = golden_corpus(7, 128)
    assert [len(c[k]) for k in ("smooth", "poly", "ellipsoid")] == [20, 10, 5]
    for _, K in c["smooth"]:
        assert K.volume() == pytest.approx(math.pi, rel=1e-10)
        assert np.linalg.norm(K.centroid()) < 1e-9
    for _, K in c["poly"]:
        assert np.linalg.norm(K.centroid()) < 1e-10
    assert np.array_equal(c["ellipsoid"][0][1].matrix, np.eye(2))
    for _, E in c["ellipsoid"]:
        assert abs(np.linalg.det(E.matrix)) == pytest.approx(1.0)
    again = golden_corpus(7, 128)
    assert all(np.array_equal(a[1].h, b[1].h) for a, b in zip(c["smooth"], again["smooth"]))


def test_every_suite_is_registered():
    assert len(SUITES) == 10


def test_monotonicity_gate_blocks_unordered_pairs():
    E = [("e", Ellipsoid(np.eye(2)))]
    r = run_suite("monotonicity-phi", corpus=E, phis=[P(1), P(2)], opts=FAST)
    assert r.summary == {"Certified": 0, "Inconclusive": 2, "Violated": 0}


def test_report_serialization_is_stable():
    E = golden_corpus(3, 64)["ellipsoid"][:2]
    r1 = run_suite("ellipsoid-closed-form", corpus=E, phis=[P(2)], grid=64, opts=FAST)
    r2 = run_suite("ellipsoid-closed-form", corpus=E, phis=[P(2)], grid=64, opts=FAST)
    assert r1.to_csv() == r2.to_csv()
    d = json.loads(r1.to_json())
    assert d["summary"]["Certified"] == 4 and d["grid"] == 64


def test_santalo_qualification_audit():
    E = [("e", Ellipsoid(np.eye(2)))]
    r = run_suite("santalo-style", corpus=E, phis=[P(2), P(-1)], opts=FAST)
    assert r.violated == 0
    assert r.count("Inconclusive") == 1
    assert any("constant unknown" in c.notes for c in r.cases)


def test_lp_consistency_on_one_body():
    K = golden_corpus(3, 256, 1, 0, 0)["smooth"]
    r = run_suite("lp-consistency", corpus=K, phis=[P(1), P(2)], opts=FAST)
    assert r.violated == 0 and r.count("Certified") == 4
