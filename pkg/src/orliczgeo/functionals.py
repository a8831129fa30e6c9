"""Orlicz affine and geominimal surface areas and their mixed variants.

The affine quantity optimizes over star bodies ``L`` sampled on the grid of
``dS(K, .)``; the geominimal one over H-polytopes ``Q`` whose facet normals
are the directions of ``dS(K, .)``.  Volume normalization is part of every
objective, so each evaluated shape is feasible and the returned value is a
valid upper bound of an infimum (class Phi) or lower bound of a supremum
(class Psi).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._runtime import ordered_map, stream
from ._shapes import PolarHullShape, StarShape
from .bodies import Ball, ConvexBody, Density, Ellipsoid, HPolytope, StarBody
from .errors import (
    MissingCurvature,
    MixedClassConflict,
    PEqualsMinusN,
    UnclassifiedPhi,
    UnsupportedDimension,
)
from .mixed_volumes import _common_grid, _density_data, _grid_for, kernel_data, support_at
from .optimize import minimize
from .orlicz import OrliczFunction, classify
from .spheregrid import SphereGrid, ball_volume

DIVERGENCE_SPREAD = 20.0  # log-scale spread of a witness treated as unbounded
MAX_STEP = 0.5  # largest log-scale change of one trial move


@dataclass(frozen=True)
class OptimizerOptions:
    restarts: int = 8
    max_iter: int = 5000
    tol: float = 1e-9
    seed: int = 0


@dataclass(frozen=True, eq=False)
class FunctionalResult:
    value: float
    direction: str  # inf | sup
    certified_side: str  # upper_bound | lower_bound
    trace: dict = field(default_factory=dict)
    witness: object = None
    flags: tuple = ()
    quantity: str = ""
    phi: str = ""

    @property
    def flagged(self) -> bool:
        return "Degenerate" in self.flags or "Diverging" in self.flags

    def __float__(self) -> float:
        return self.value

    def to_dict(self, include_witness: bool = True) -> dict:
        from .io import body_to_dict

        out = {
            "quantity": self.quantity,
            "phi": self.phi,
            "value": self.value if np.isfinite(self.value) else None,
            "unbounded": bool(not np.isfinite(self.value)),
            "direction": self.direction,
            "certified_side": self.certified_side,
            "flags": list(self.flags),
            "trace": self.trace,
        }
        if include_witness and self.witness is not None:
            w = self.witness if isinstance(self.witness, tuple) else (self.witness,)
            out["witness"] = [body_to_dict(b) for b in w]
        return out


def _side(direction: str) -> str:
    return "upper_bound" if direction == "inf" else "lower_bound"


def direction_for(phis: Sequence[OrliczFunction], dim: int) -> tuple:
    """(direction, all_constant) for a family of functions that must share a class."""
    classes = [classify(p, dim).cls for p in phis]
    if "Neither" in classes:
        bad = [p.label for p, c in zip(phis, classes) if c == "Neither"]
        raise UnclassifiedPhi(f"{', '.join(bad)} is in neither Phi nor Psi")
    real = {c for c in classes if c != "ConstantBoth"}
    if len(real) > 1:
        raise MixedClassConflict("functions mix the classes Phi and Psi")
    if not real:
        return "inf", True
    return ("inf" if real.pop() == "Phi" else "sup"), False


# ---------------------------------------------------------------------------
# objective assembly


@dataclass
class _Part:
    shape: object
    phi: OrliczFunction
    h: np.ndarray
    m: np.ndarray  # per-direction mass multiplying phi
    e: float  # exponent


class _Objective:
    """``J(x) = sum_j sigma_j prod_b [phi_b(a_bj / h_bj) m_bj]^(e_b)``."""

    def __init__(self, parts: Sequence[_Part], sigma: np.ndarray, sign: float):
        self.parts = list(parts)
        self.sigma = sigma
        self.sign = sign
        self.sizes = [len(p.h) for p in parts]
        self.cuts = np.cumsum([0] + self.sizes)

    def blocks(self, x):
        return [x[a:b] for a, b in zip(self.cuts[:-1], self.cuts[1:])]

    def project(self, x):
        return np.concatenate([p.shape.project(xb) for p, xb in zip(self.parts, self.blocks(x))])

    def value_grad(self, x):
        scaled = []
        for p, xb in zip(self.parts, self.blocks(x)):
            a, pull = p.shape.scale(xb)
            arg = a / p.h
            val = p.phi.raw(arg)
            if np.any(~np.isfinite(val)) or np.any(val <= 0):
                return np.inf, np.zeros_like(x)
            scaled.append((arg, val, pull))
        if len(self.parts) == 1 and self.parts[0].e == 1.0:
            T = self.sigma * scaled[0][1] * self.parts[0].m
        else:
            logT = sum(p.e * np.log(val * p.m) for p, (_, val, _) in zip(self.parts, scaled))
            T = self.sigma * np.exp(logT)
        J = float(np.sum(T))
        if not np.isfinite(J):
            return np.inf, np.zeros_like(x)
        grads = []
        for p, (arg, val, pull) in zip(self.parts, scaled):
            if p.e == 0.0:
                grads.append(np.zeros_like(arg))
                continue
            g = T * p.e * p.phi.derivative(arg) * arg / val
            grads.append(pull(self.sign * g))
        return self.sign * J, np.concatenate(grads)

    def value(self, x) -> float:
        return self.sign * self.value_grad(x)[0]


def _optimize(obj: _Objective, starts, precond, opts: OptimizerOptions):
    def run(x0):
        res = minimize(obj.value_grad, x0, project=obj.project, precond=precond,
                       max_iter=opts.max_iter, rel_tol=opts.tol, max_step=MAX_STEP)
        return res

    results = ordered_map(run, starts)
    best = 0
    for k, r in enumerate(results):
        if r.value < results[best].value:
            best = k
    r = results[best]
    trace = {
        "iterations": int(sum(q.iterations for q in results)),
        "restarts": len(results),
        "best_restart": best,
        "final_grad_norm": r.grad_norm,
        "converged": bool(r.converged),
        "evaluations": int(sum(q.evaluations for q in results)),
        "restart_values": [float(obj.sign * q.value) for q in results],
    }
    return r.x, obj.sign * r.value, trace


def _spread_flag(x_blocks, direction) -> tuple:
    for xb in x_blocks:
        if np.ptp(xb) > DIVERGENCE_SPREAD:
            return ("Degenerate",) if direction == "inf" else ("Diverging",)
    return ()


def _random_start(rng, dirs, logh):
    n = dirs.shape[1]
    M = rng.normal(0.0, 0.15, size=(n, n))
    M = 0.5 * (M + M.T)
    b = rng.normal(0.0, 0.1, size=n)
    mix = rng.uniform(0.0, 1.0)
    return mix * logh + np.einsum("ij,jk,ik->i", dirs, M, dirs) + dirs @ b


# ---------------------------------------------------------------------------
# single body


def _constant_result(K, phi, quantity, witness=None) -> FunctionalResult:
    a = float(phi.raw(1.0))
    value = a * K.dim * K.volume()
    return FunctionalResult(value, "inf", "upper_bound", {"restarts": 0, "iterations": 0},
                            witness, ("Exact",), quantity, phi.label)


def _atomic_limit(K, phi, direction, quantity) -> FunctionalResult:
    nK = K.dim * K.volume()
    if direction == "inf":
        value, flag = nK * phi.inf_value, "Degenerate"
    else:
        sup = phi.sup_value
        value = nK * sup
        flag = "Diverging" if not np.isfinite(sup) else "Degenerate"
    return FunctionalResult(value, direction, _side(direction), {"restarts": 0, "iterations": 0},
                            None, (flag,), quantity, phi.label)


def _affine_kkt(phi: OrliczFunction, direction: str, h, W, w, n) -> np.ndarray:
    """Radial values of the optimal star body of the discrete affine problem.

    In ``y = rho^n`` the objective is ``sum F(y_j h_j^n) h_j W_j`` subject to
    ``sum y_j w_j = n omega_n``: convex for Phi, concave for Psi.  Stationarity
    reads ``F'(s_j) = lambda / c_j`` with ``s_j = y_j h_j^n`` and
    ``c_j = h_j^(n+1) W_j / w_j``; both the per-node equation and the
    multiplier are found by bisection.
    """
    c = h ** (n + 1) * W / w
    Fp = phi.F_derivative
    increasing = direction == "inf"
    target = n * ball_volume(n)

    def solve_s(lam):
        tau = lam / c
        lo = np.full(len(c), -120.0)
        hi = np.full(len(c), 120.0)
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            v = Fp(np.exp(mid))
            small = (v < tau) if increasing else (v > tau)
            lo = np.where(small, mid, lo)
            hi = np.where(small, hi, mid)
        return 0.5 * (lo + hi)

    def vol(mu):
        ls = solve_s(np.sinh(mu))
        return float(np.sum(np.exp(ls - n * np.log(h)) * w)), ls

    lo, hi = -300.0, 300.0
    up = increasing  # total volume increases with mu for Phi, decreases for Psi
    ls = None
    for _ in range(70):
        mid = 0.5 * (lo + hi)
        v, ls = vol(mid)
        if (v < target) == up:
            lo = mid
        else:
            hi = mid
    _, ls = vol(0.5 * (lo + hi))
    return np.exp((ls - n * np.log(h)) / n)


def affine_orlicz(K: ConvexBody, phi: OrliczFunction, grid: Optional[SphereGrid] = None,
                  opts: Optional[OptimizerOptions] = None,
                  seed_witness: Optional[FunctionalResult] = None) -> FunctionalResult:
    """Orlicz affine surface area of ``K``.

    For Phi this is an upper bound of the infimum, for Psi a lower bound of
    the supremum.  Polytopes (atomic surface area measure) give the
    degenerate limit ``n|K| inf phi`` (resp. ``sup phi``) with a flag.
    ``seed_witness`` may carry a geominimal result whose polar witness is
    also considered, which makes this value never worse than it.
    """
    n = K.dim
    phi = phi.with_dim(n)
    direction, constant = direction_for([phi], n)
    quantity = "affine"
    if constant:
        return _constant_result(K, phi, quantity)
    kd = kernel_data(K, grid)
    if kd.atomic:
        return _atomic_limit(K, phi, direction, quantity)
    g = kd.grid
    rho = _affine_kkt(phi, direction, kd.h, kd.dS, g.weights, n)
    shape = StarShape(g.weights, n)
    obj = _Objective([_Part(shape, phi, kd.h, kd.h * kd.dS, 1.0)], np.ones(g.size),
                     1.0 if direction == "inf" else -1.0)
    x = shape.project(np.log(rho))
    value = obj.value(x)
    witness = StarBody(g, np.exp(x))
    trace = {"restarts": 1, "iterations": 0, "method": "stationarity", "converged": True}
    flags = _spread_flag([x], direction)
    if seed_witness is not None and isinstance(seed_witness.witness, HPolytope):
        better = seed_witness.value < value if direction == "inf" else seed_witness.value > value
        if better and np.isfinite(seed_witness.value):
            value = seed_witness.value
            Q = seed_witness.witness
            witness = StarBody(g, 1.0 / support_at(Q, g.nodes))
            trace = dict(trace, seeded_from="geominimal")
    return FunctionalResult(value, direction, _side(direction), trace, witness, flags,
                            quantity, phi.label)


def geominimal_orlicz(K: ConvexBody, phi: OrliczFunction, grid: Optional[SphereGrid] = None,
                      opts: Optional[OptimizerOptions] = None) -> FunctionalResult:
    """Orlicz geominimal surface area of ``K`` (``n <= 3``)."""
    opts = opts or OptimizerOptions()
    n = K.dim
    if n > 3:
        raise UnsupportedDimension("geominimal optimization needs exact polar volumes (n <= 3)")
    phi = phi.with_dim(n)
    direction, constant = direction_for([phi], n)
    quantity = "geominimal"
    if constant:
        return _constant_result(K, phi, quantity)
    kd = kernel_data(K, grid)
    shape = PolarHullShape(kd.dirs)
    sign = 1.0 if direction == "inf" else -1.0
    obj = _Objective([_Part(shape, phi, kd.h, kd.h * kd.dS, 1.0)], np.ones(len(kd.h)), sign)
    logh = np.log(kd.h)
    starts = [logh.copy()]
    if not kd.atomic:
        # polar hull of the optimal star body of the affine problem
        starts.append(-np.log(_affine_kkt(phi, direction, kd.h, kd.dS, kd.grid.weights, n)))
    starts.append(np.zeros(len(kd.h)))
    for k in range(max(0, opts.restarts - len(starts))):
        starts.append(_random_start(stream(opts.seed, "geominimal", k), kd.dirs, logh))
    starts = starts[: max(1, opts.restarts)]
    pre = kd.h * kd.dS
    x, value, trace = _optimize(obj, starts, pre / pre.mean(), opts)
    x = obj.project(x)
    witness = HPolytope(kd.dirs, np.exp(x))
    return FunctionalResult(value, direction, _side(direction), trace, witness,
                            _spread_flag([x], direction), quantity, phi.label)


# ---------------------------------------------------------------------------
# planar mixed functionals


def _mixed(Ks, phis, exps, which, grid, opts, quantity):
    opts = opts or OptimizerOptions()
    if any(K.dim != 2 for K in Ks):
        raise UnsupportedDimension("mixed functionals are implemented for n = 2")
    phis = [p.with_dim(2) for p in phis]
    active = [p for p, e in zip(phis, exps) if e != 0.0] or phis
    direction, constant = direction_for(active, 2)
    direction_for(phis, 2)  # still reject mixed classes among inactive factors
    g = _common_grid(Ks, grid)
    data = [_density_data(K, g) for K in Ks]
    sign = 1.0 if direction == "inf" else -1.0
    parts = []
    for (gg, h, f), phi, e in zip(data, phis, exps):
        shape = StarShape(g.weights, 2) if which == "affine" else PolarHullShape(g.nodes)
        parts.append(_Part(shape, phi, h, h * f, e))
    obj = _Objective(parts, g.weights, sign)
    m = g.size
    starts = [np.zeros(len(Ks) * m)]
    seeds = []
    for (_, h, f), phi in zip(data, phis):
        if which == "geominimal":
            seeds.append(np.log(h))
        elif classify(phi, 2).cls == "ConstantBoth":
            seeds.append(np.zeros(m))
        else:
            seeds.append(np.log(_affine_kkt(phi, direction, h, f * g.weights, g.weights, 2)))
    starts.append(np.concatenate(seeds))
    for k in range(max(0, opts.restarts - 2)):
        rng = stream(opts.seed, quantity, which, k)
        starts.append(np.concatenate([_random_start(rng, g.nodes, np.log(h)) for (_, h, _) in data]))
    starts = starts[: max(1, opts.restarts)]
    pre = np.concatenate([h * f * g.weights for (_, h, f) in data])
    x, value, trace = _optimize(obj, starts, pre / pre.mean(), opts)
    x = obj.project(x)
    blocks = obj.blocks(x)
    if which == "affine":
        witness = tuple(StarBody(g, np.exp(b)) for b in blocks)
    else:
        witness = tuple(HPolytope(g.nodes, np.exp(b)) for b in blocks)
    label = ",".join(p.label for p in phis)
    return FunctionalResult(value, direction, _side(direction), trace, witness,
                            _spread_flag(blocks, direction), quantity, label)


def affine_orlicz_multi(Ks: Sequence[ConvexBody], phis: Sequence[OrliczFunction],
                        grid: Optional[SphereGrid] = None,
                        opts: Optional[OptimizerOptions] = None) -> FunctionalResult:
    """Mixed Orlicz affine surface area of ``(K_1, K_2)`` in the plane."""
    if len(Ks) != 2 or len(phis) != 2:
        raise UnsupportedDimension("mixed functionals take n = 2 bodies")
    return _mixed(Ks, phis, (0.5, 0.5), "affine", grid, opts, "affine_multi")


def geominimal_orlicz_multi(Ks: Sequence[ConvexBody], phis: Sequence[OrliczFunction],
                            grid: Optional[SphereGrid] = None,
                            opts: Optional[OptimizerOptions] = None) -> FunctionalResult:
    """Mixed Orlicz geominimal surface area of ``(K_1, K_2)`` in the plane."""
    if len(Ks) != 2 or len(phis) != 2:
        raise UnsupportedDimension("mixed functionals take n = 2 bodies")
    return _mixed(Ks, phis, (0.5, 0.5), "geominimal", grid, opts, "geominimal_multi")


def ith_mixed(K: ConvexBody, L: ConvexBody, phi1: OrliczFunction, phi2: OrliczFunction,
              i: float, which: str = "affine", grid: Optional[SphereGrid] = None,
              opts: Optional[OptimizerOptions] = None) -> FunctionalResult:
    """Orlicz ``i``-th mixed affine or geominimal surface area, ``n = 2``."""
    if which not in ("affine", "geominimal"):
        raise ValueError("which must be 'affine' or 'geominimal'")
    n = 2
    exps = ((n - i) / n, i / n)
    return _mixed([K, L], [phi1, phi2], exps, which, grid, opts, f"ith_mixed_{which}")


# ---------------------------------------------------------------------------
# closed forms and L_p references


def lp_affine_closed_form(K: ConvexBody, p: float, grid: Optional[SphereGrid] = None) -> float:
    """``as_p(K) = int [h^(1-p) f]^(n/(n+p)) dsigma`` for bodies with curvature."""
    n = K.dim
    if p == -n:
        raise PEqualsMinusN("p = -n is excluded")
    g = _grid_for(K, grid)
    measure = K.surface_area_measure(g)
    if not isinstance(measure, Density):
        raise MissingCurvature("closed form needs a curvature function")
    g = measure.grid
    h = support_at(K, g.nodes, g)
    return float(np.sum((h ** (1.0 - p) * measure.f) ** (n / (n + p)) * g.weights))


def lp_reference(K: ConvexBody, p: float, which: str = "affine",
                 grid: Optional[SphereGrid] = None,
                 opts: Optional[OptimizerOptions] = None) -> float:
    """``as_p`` or ``G~_p`` through the Orlicz optimizer with ``phi = t^p``."""
    n = K.dim
    if p == -n:
        raise PEqualsMinusN("p = -n is excluded")
    phi = OrliczFunction.power(p, n)
    if which == "affine":
        res = affine_orlicz(K, phi, grid, opts)
    elif which == "geominimal":
        res = geominimal_orlicz(K, phi, grid, opts)
    else:
        raise ValueError("which must be 'affine' or 'geominimal'")
    return orlicz_to_lp(res.value, p, n)


def orlicz_to_lp(value: float, p: float, n: int) -> float:
    """Invert ``(n omega_n)^(p/n) value = X^((n+p)/n)`` for ``X``."""
    return float(((n * ball_volume(n)) ** (p / n) * value) ** (n / (n + p)))


def lutwak_gp(K: ConvexBody, Q: HPolytope, p: float, grid: Optional[SphereGrid] = None) -> float:
    """Lutwak's ``G_p`` objective ``n V_p(K, Q) |Q polar|^(p/n) / omega_n^(p/n)`` at ``Q``."""
    from .mixed_volumes import v_p

    n = K.dim
    qv = Q.polar().volume()
    return n * v_p(K, Q, p, grid=grid) * qv ** (p / n) / ball_volume(n) ** (p / n)


def ellipsoid_closed_form(E: ConvexBody, phi: OrliczFunction) -> float:
    """``n phi(vrad(E polar)) |E|`` for a centered ellipsoid or ball."""
    if not isinstance(E, (Ellipsoid, Ball)):
        raise TypeError("closed form applies to Ellipsoid or Ball")
    n = E.dim
    phi = phi.with_dim(n)
    return float(n * phi(E.polar().vrad()) * E.volume())


def ball_functional(phi: OrliczFunction, radius: float, dim: int) -> float:
    """Value of every single-body functional on ``radius * B``."""
    return float(dim * phi.with_dim(dim)(1.0 / radius) * ball_volume(dim) * radius**dim)


__all__ = [
    "OptimizerOptions", "FunctionalResult", "affine_orlicz", "geominimal_orlicz",
    "affine_orlicz_multi", "geominimal_orlicz_multi", "ith_mixed", "lp_affine_closed_form",
    "lp_reference", "orlicz_to_lp", "lutwak_gp", "ellipsoid_closed_form", "ball_functional",
    "direction_for",
]
