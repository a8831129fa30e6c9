import math

import numpy as np
import pytest

from orliczgeo import OrliczFunction, audit_composition, classify
from orliczgeo.errors import DomainError, NearDegenerate, ParseError, RangeError

P = OrliczFunction.power


@pytest.mark.parametrize(
    "phi,cls",
    [
        (P(2), "Phi"),
        (P(0.5), "Phi"),
        (P(-3), "Phi"),
        (P(-1), "Psi"),
        (P(-0.5), "Psi"),
        (OrliczFunction.arctan_inv_n(), "Psi"),
        (OrliczFunction.log1p_inv_n(), "Psi"),
        (OrliczFunction.exp_neg_inv_n(), "Phi"),
        (OrliczFunction.constant(3), "ConstantBoth"),
    ],
)
def test_classification_in_the_plane(phi, cls):
    assert classify(phi, 2).cls == cls


def test_classification_depends_on_dimension():
    assert classify(P(-2.5), 2).cls == "Phi"
    assert classify(P(-2.5), 3).cls == "Psi"


def test_power_minus_n_is_rejected():
    with pytest.raises(NearDegenerate):
        classify(P(-2), 2)


def test_custom_function_outside_both_classes():
    phi = OrliczFunction.custom(lambda t: np.exp(-t), "exp_neg")
    assert classify(phi, 2).cls == "Neither"


def test_custom_function_audited_numerically():
    phi = OrliczFunction.custom(lambda t: t**2 + t, "quad")
    c = classify(phi, 2)
    assert c.cls == "Phi" and c.increasing


@pytest.mark.parametrize(
    "phi",
    [P(2), P(-1), P(0.5), OrliczFunction.arctan_inv_n(), OrliczFunction.log1p_inv_n(),
     OrliczFunction.exp_neg_inv_n()],
)
def test_inverse_round_trip(phi):
    t = np.geomspace(0.2, 5.0, 41)
    assert np.allclose(phi.inverse(phi(t)), t, rtol=1e-10)


def test_inverse_outside_range():
    with pytest.raises(DomainError):
        OrliczFunction.arctan_inv_n().inverse(2.0)


@pytest.mark.parametrize("phi", [P(2), P(-1), OrliczFunction.arctan_inv_n(),
                                 OrliczFunction.exp_neg_inv_n()])
def test_derivatives_match_finite_differences(phi):
    t = np.geomspace(0.3, 3.0, 17)
    eps = 1e-6
    fd = (phi(t * (1 + eps)) - phi(t * (1 - eps))) / (2 * eps * t)
    assert np.allclose(phi.derivative(t), fd, rtol=1e-6)
    n = phi.dim
    F = lambda s: phi(s ** (-1.0 / n))  # noqa: E731
    fdF = (F(t * (1 + eps)) - F(t * (1 - eps))) / (2 * eps * t)
    assert np.allclose(phi.F_derivative(t), fdF, rtol=1e-6)


def test_checked_evaluation_rejects_nonpositive_arguments():
    with pytest.raises(DomainError):
        P(2)(np.array([1.0, -1.0]))
    with pytest.raises(RangeError):
        OrliczFunction.custom(lambda t: t - 1.0, "shift")(np.array([0.5]))


def test_dict_round_trip_and_labels():
    for phi in (P(2.5), OrliczFunction.constant(3), OrliczFunction.log1p_inv_n(dim=3)):
        back = OrliczFunction.from_dict(phi.to_dict())
        assert back.label == phi.label and back.dim == phi.dim
        t = np.geomspace(0.1, 10, 11)
        assert np.array_equal(back(t), phi(t))
    with pytest.raises(ParseError):
        OrliczFunction.from_dict({"kind": "nope"})
    with pytest.raises(ParseError):
        OrliczFunction.custom(math.sin, "sin").to_dict()


def test_inf_and_sup_values():
    assert P(2).inf_value == 0.0 and P(2).sup_value == math.inf
    assert OrliczFunction.arctan_inv_n().sup_value == pytest.approx(math.pi / 2)
    assert OrliczFunction.constant(3).inf_value == 3.0


@pytest.mark.parametrize(
    "p,q,inc,convex,concave",
    [
        (-3, -1, True, True, False),   # H(y) = y^3
        (-3, 2, False, True, False),   # H(y) = y^-1.5
        (1, 2, True, False, True),     # H(y) = y^0.5
        (2, 1, True, True, False),     # H(y) = y^2
    ],
)
def test_composition_audit_on_power_pairs(p, q, inc, convex, concave):
    a = audit_composition(P(p), P(q))
    assert a.increasing == inc
    assert a.decreasing == (not inc)
    assert a.convex == convex
    assert a.concave == concave
