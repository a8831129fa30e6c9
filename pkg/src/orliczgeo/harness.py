"""Inequality suites with one-sided certification.

Every number entering a comparison carries a *side*:

* ``exact``: closed forms, kernel sums, and affine values (the discretized
  affine problem is convex or concave and is solved to its global optimum);
* ``upper``: value of an infimum search, which can only overestimate;
* ``lower``: value of a supremum search, which can only underestimate;
* ``none``: no direction known (for instance after mixing an upper and a
  lower bound).

``lhs <= rhs`` is certifiable when ``lhs`` is exact or an upper bound and
``rhs`` is exact or a lower bound, and symmetrically for ``>=``.  A
certifiable case is Certified when its relative margin is at least ``-tol``
and Violated otherwise.  Cases that cannot be certified are Inconclusive,
whatever their margin.  Consistency checks (``==``) are Certified within
``tol`` and Violated outside it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ._runtime import stream
from .bodies import (
    Ball,
    ConvexBody,
    Ellipsoid,
    SmoothSampled,
    apply_sl,
    normalize_volume,
    random_body,
    random_sl,
)
from .errors import ClassMismatch, OrliczError, RangeError, UnknownSuite
from .functionals import (
    FunctionalResult,
    OptimizerOptions,
    affine_orlicz,
    affine_orlicz_multi,
    ball_functional,
    ellipsoid_closed_form,
    geominimal_orlicz,
    geominimal_orlicz_multi,
    ith_mixed,
    lp_affine_closed_form,
    lutwak_gp,
    orlicz_to_lp,
)
from .io import dumps, to_csv
from .mixed_volumes import s_phi
from .orlicz import AUDIT_RANGE, OrliczFunction, audit_composition, classify
from .spheregrid import ball_volume, build_grid

SUITES = (
    "ellipsoid-closed-form",
    "comparison",
    "monotonicity-phi",
    "cyclic-monotonicity",
    "isoperimetric",
    "santalo-style",
    "affine-invariance",
    "alexander-fenchel",
    "ith-mixed-cyclic",
    "lp-consistency",
)
EQUALITY_SUITES = ("ellipsoid-closed-form", "comparison", "isoperimetric", "alexander-fenchel")

DEFAULT_TOL = 0.01
DEFAULT_SEED = 20150601
DEFAULT_RESOLUTION = 256
DEFAULT_RESTARTS = 4

P = OrliczFunction.power


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class Case:
    bodies: Tuple[str, ...]
    phis: Tuple[str, ...]
    claim: str
    relation: str
    lhs: float
    rhs: float
    margin: float
    status: str
    notes: str = ""

    def to_dict(self) -> dict:
        return {
            "bodies": list(self.bodies),
            "phis": list(self.phis),
            "claim": self.claim,
            "relation": self.relation,
            "lhs": _json_float(self.lhs),
            "rhs": _json_float(self.rhs),
            "margin": _json_float(self.margin),
            "status": self.status,
            "notes": self.notes,
        }


def _json_float(x: float):
    if math.isfinite(x):
        return float(x)
    if math.isnan(x):
        return None
    return "inf" if x > 0 else "-inf"


@dataclass
class SuiteReport:
    suite: str
    cases: List[Case]
    seed: int
    tolerances: Dict[str, float]
    grid: int = 0

    def count(self, status: str) -> int:
        return sum(1 for c in self.cases if c.status == status)

    @property
    def violated(self) -> int:
        return self.count("Violated")

    @property
    def summary(self) -> dict:
        return {s: self.count(s) for s in ("Certified", "Inconclusive", "Violated")}

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "grid": self.grid,
            "tolerances": dict(self.tolerances),
            "summary": self.summary,
            "cases": [c.to_dict() for c in self.cases],
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())

    def to_csv(self) -> str:
        header = ["suite", "bodies", "phis", "claim", "relation", "lhs", "rhs", "margin",
                  "status", "notes"]
        rows = [
            [self.suite, ";".join(c.bodies), ";".join(c.phis), c.claim, c.relation,
             c.lhs, c.rhs, c.margin, c.status, c.notes]
            for c in self.cases
        ]
        return to_csv(header, rows)


# ---------------------------------------------------------------------------
# one-sided values


@dataclass(frozen=True)
class Bound:
    value: float
    side: str  # exact | upper | lower | none

    def __mul__(self, other: "Bound") -> "Bound":
        return Bound(self.value * other.value, _combine(self.side, other.side))

    def __pow__(self, e: float) -> "Bound":
        if e == 0:
            return Bound(1.0, "exact")
        side = self.side if e > 0 else _flip(self.side)
        with np.errstate(divide="ignore", over="ignore"):
            return Bound(float(np.power(self.value, e)), side)

    def scaled(self, c: float) -> "Bound":
        side = self.side if c > 0 else _flip(self.side)
        return Bound(self.value * c, side)

    def mapped(self, fn: Callable[[float], float], increasing: bool) -> "Bound":
        side = self.side if increasing else _flip(self.side)
        return Bound(float(fn(self.value)), side)


def _flip(side: str) -> str:
    return {"upper": "lower", "lower": "upper"}.get(side, side)


def _combine(a: str, b: str) -> str:
    if a == "exact":
        return b
    if b == "exact" or a == b:
        return a
    return "none"


def exact(x: float) -> Bound:
    return Bound(float(x), "exact")


def _certifiable(lhs: Bound, relation: str, rhs: Bound) -> bool:
    if relation == "<=":
        return lhs.side in ("exact", "upper") and rhs.side in ("exact", "lower")
    return lhs.side in ("exact", "lower") and rhs.side in ("exact", "upper")


def _margin(lhs: float, relation: str, rhs: float) -> float:
    """Relative slack of ``lhs relation rhs``; positive when it holds."""
    big, small = (rhs, lhs) if relation == "<=" else (lhs, rhs)
    if math.isnan(big) or math.isnan(small):
        return math.nan
    if big == small:
        return 0.0
    if math.isinf(big) or math.isinf(small):
        return 1.0 if big > small else -1.0
    scale = max(abs(lhs), abs(rhs))
    return (big - small) / scale


def _case(bodies, phis, claim, lhs: Bound, relation: str, rhs: Bound, tol: float,
          notes: str = "") -> Case:
    lv, rv = lhs.value, rhs.value
    if relation == "==":
        if lv == rv:
            m = 0.0
        elif math.isinf(lv) or math.isinf(rv):
            m = math.inf
        else:
            m = abs(lv - rv) / max(abs(lv), abs(rv))
        status = "Certified" if m <= tol else "Violated"
        return Case(tuple(bodies), tuple(phis), claim, relation, lv, rv, m, status, notes)
    m = _margin(lv, relation, rv)
    if not _certifiable(lhs, relation, rhs):
        extra = f"sides lhs={lhs.side} rhs={rhs.side} cannot certify"
        return Case(tuple(bodies), tuple(phis), claim, relation, lv, rv, m, "Inconclusive",
                    _join(notes, extra))
    if m >= 0:
        status = "Certified"
    elif m >= -tol:
        status = "Certified"
        notes = _join(notes, "within tolerance")
    else:
        status = "Violated"
    return Case(tuple(bodies), tuple(phis), claim, relation, lv, rv, m, status, notes)


def _inconclusive(bodies, phis, claim, relation, lhs: float, rhs: float, notes: str) -> Case:
    m = _margin(lhs, relation, rhs) if relation != "==" else abs(lhs - rhs)
    return Case(tuple(bodies), tuple(phis), claim, relation, lhs, rhs, m, "Inconclusive", notes)


def _join(a: str, b: str) -> str:
    return f"{a}; {b}" if a else b


# ---------------------------------------------------------------------------
# evaluation with memoization


class _Engine:
    """Computes and caches functional values for named bodies."""

    def __init__(self, grid, opts: OptimizerOptions):
        self.grid = grid
        self.opts = opts
        self._memo: Dict[tuple, object] = {}

    def _get(self, key, fn):
        if key not in self._memo:
            self._memo[key] = fn()
        return self._memo[key]

    def _grid(self, K):
        return K.grid if isinstance(K, SmoothSampled) else self.grid

    def affine_result(self, bid, K, phi) -> FunctionalResult:
        return self._get(("A", bid, phi.label), lambda: affine_orlicz(K, phi, self._grid(K), self.opts))

    def geominimal_result(self, bid, K, phi) -> FunctionalResult:
        return self._get(("G", bid, phi.label),
                         lambda: geominimal_orlicz(K, phi, self._grid(K), self.opts))

    def affine(self, bid, K, phi) -> Bound:
        r = self.affine_result(bid, K, phi)
        return Bound(r.value, "exact")

    def geominimal(self, bid, K, phi) -> Bound:
        r = self.geominimal_result(bid, K, phi)
        return Bound(r.value, "exact" if "Exact" in r.flags else r.certified_side.split("_")[0])

    def multi(self, which, ids, Ks, phis) -> Bound:
        fn = affine_orlicz_multi if which == "affine" else geominimal_orlicz_multi
        key = ("M", which, tuple(ids), tuple(p.label for p in phis))
        r = self._get(key, lambda: fn(Ks, phis, self._grid(Ks[0]), self.opts))
        return Bound(r.value, r.certified_side.split("_")[0])

    def ith(self, which, ids, K, L, phi1, phi2, i) -> Bound:
        key = ("I", which, tuple(ids), phi1.label, phi2.label, float(i))
        r = self._get(key, lambda: ith_mixed(K, L, phi1, phi2, i, which, self._grid(K), self.opts))
        return Bound(r.value, r.certified_side.split("_")[0])

    def s_phi(self, bid, K, phi) -> Bound:
        return self._get(("S", bid, phi.label), lambda: exact(s_phi(K, phi, self._grid(K))))


def _functional_side_note(r: FunctionalResult) -> str:
    return ",".join(r.flags)


# ---------------------------------------------------------------------------
# corpus


def golden_corpus(seed: int = DEFAULT_SEED, resolution: int = DEFAULT_RESOLUTION,
                  n_smooth: int = 20, n_poly: int = 10, n_ellipsoid: int = 5) -> Dict[str, list]:
    """Seeded planar corpus of ``(id, body)`` pairs, every body centroid-centered.

    Smooth bodies are rescaled to area ``pi``; ellipsoids have ``|det| = 1``
    and the first one is the unit ball.
    """
    grid = build_grid(2, resolution)
    smooth = []
    for k in range(n_smooth):
        rng_seed = stream(seed, "corpus", "smooth", k).integers(2**32)
        K = random_body(2, int(rng_seed), "smooth", grid)
        smooth.append((f"smooth-{k:02d}", normalize_volume(K, math.pi)))
    polys = []
    for k in range(n_poly):
        rng_seed = stream(seed, "corpus", "poly", k).integers(2**32)
        polys.append((f"poly-{k:02d}", random_body(2, int(rng_seed), "polytope")))
    ells = [("ellipsoid-00", Ellipsoid(np.eye(2)))]
    for k in range(1, n_ellipsoid):
        rng = stream(seed, "corpus", "ellipsoid", k)
        a = math.exp(rng.uniform(-0.6, 0.6))
        th = rng.uniform(0, math.pi)
        R = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
        shear = np.array([[1.0, rng.uniform(-0.5, 0.5)], [0.0, 1.0]])
        ells.append((f"ellipsoid-{k:02d}", Ellipsoid(R @ np.diag([a, 1.0 / a]) @ shear)))
    return {"smooth": smooth, "poly": polys, "ellipsoid": ells}


def _named(corpus) -> List[Tuple[str, ConvexBody]]:
    out = []
    for k, item in enumerate(corpus):
        if isinstance(item, tuple):
            out.append((str(item[0]), item[1]))
        else:
            out.append((f"body-{k:02d}", item))
    return out


def _default_corpus(name: str, seed: int, resolution: int):
    c = golden_corpus(seed, resolution)
    s, p, e = c["smooth"], c["poly"], c["ellipsoid"]
    return {
        "ellipsoid-closed-form": e,
        "comparison": s + p + e,
        "monotonicity-phi": s[:4] + p[:3] + e[:2],
        "cyclic-monotonicity": s[:4] + p[:3] + e[:2],
        "isoperimetric": s + e,
        "santalo-style": s[:5] + p[:4] + e[:3],
        "affine-invariance": s[:10],
        "alexander-fenchel": s,
        "ith-mixed-cyclic": s[:10],
        "lp-consistency": s[:10],
    }[name]


DEFAULT_PHIS = {
    "ellipsoid-closed-form": [P(2), P(-1), OrliczFunction.arctan_inv_n(),
                              OrliczFunction.log1p_inv_n(), OrliczFunction.constant(3)],
    "comparison": [P(2), P(-1)],
    # flattened (phi, psi) pairs
    "monotonicity-phi": [OrliczFunction.exp_neg_inv_n(), P(2),
                         OrliczFunction.arctan_inv_n(), P(-1),
                         OrliczFunction.log1p_inv_n(), P(-1),
                         P(1), P(2)],
    "cyclic-monotonicity": [P(-3), P(-1),   # (a)
                            P(-3), P(2),    # (b)
                            P(1), P(2),     # (c), Phi pair
                            P(-0.5), P(-1),  # (c), Psi pair
                            P(-1), P(-3),   # (d)
                            P(-1), P(2),    # (e)
                            P(2), P(1),     # (f), Phi pair
                            P(-1), P(-0.5),  # (f), Psi pair
                            P(0.5), P(1)],  # concave increasing phi against psi(t) = t
    "isoperimetric": [P(2), P(-1), P(0.5)],
    "santalo-style": [P(2), P(-1)],
    "affine-invariance": [P(2)],
    # flattened (phi_1, phi_2) pairs
    "alexander-fenchel": [P(2), P(1), P(-1), OrliczFunction.arctan_inv_n()],
    "ith-mixed-cyclic": [P(-1), OrliczFunction.arctan_inv_n(), P(2), P(1)],
    "lp-consistency": [P(0.5), P(1), P(2)],
}


# ---------------------------------------------------------------------------
# entry points


def run_suite(name: str, corpus: Optional[Sequence] = None,
              phis: Optional[Sequence[OrliczFunction]] = None,
              grid: Optional[int] = None, tol: float = DEFAULT_TOL,
              seed: int = DEFAULT_SEED, opts: Optional[OptimizerOptions] = None) -> SuiteReport:
    """Run one inequality suite and return its report.

    ``corpus`` holds bodies or ``(id, body)`` pairs and defaults to the
    suite's slice of :func:`golden_corpus`.  ``grid`` is the quadrature
    resolution for bodies without their own grid.  Suites that compare two
    Orlicz functions read ``phis`` as flattened pairs.
    """
    if name not in SUITES:
        raise UnknownSuite(name)
    resolution = int(grid) if grid is not None else DEFAULT_RESOLUTION
    g = build_grid(2, resolution)
    opts = opts or OptimizerOptions(restarts=DEFAULT_RESTARTS, seed=seed)
    bodies = _named(corpus) if corpus is not None else _default_corpus(name, seed, resolution)
    phis = list(phis) if phis is not None else list(DEFAULT_PHIS[name])
    eng = _Engine(g, opts)
    cases = _SUITE_FUNCS[name](bodies, phis, eng, tol, seed)
    return SuiteReport(name, cases, seed, {"relative": tol}, resolution)


def equality_witness(name: str, grid: Optional[int] = None, tol: float = DEFAULT_TOL,
                     seed: int = DEFAULT_SEED, opts: Optional[OptimizerOptions] = None,
                     phis: Optional[Sequence[OrliczFunction]] = None) -> SuiteReport:
    """Check that the equality cases of a suite are tight within ``tol``.

    Bodies are the golden ellipsoids (the unit ball first).  Only the "if"
    direction of each equality clause is tested.
    """
    if name not in EQUALITY_SUITES:
        raise UnknownSuite(f"{name} (no equality cases)")
    resolution = int(grid) if grid is not None else DEFAULT_RESOLUTION
    g = build_grid(2, resolution)
    opts = opts or OptimizerOptions(restarts=DEFAULT_RESTARTS, seed=seed)
    ells = golden_corpus(seed, resolution, 0, 0, 5)["ellipsoid"]
    eng = _Engine(g, opts)
    if name == "ellipsoid-closed-form":
        cases = _ellipsoid_closed_form(ells, list(phis or DEFAULT_PHIS[name]), eng, tol, seed)
    elif name == "comparison":
        cases = []
        for bid, E in ells:
            for phi in phis or DEFAULT_PHIS[name]:
                cf = exact(ellipsoid_closed_form(E, phi))
                A, G = eng.affine(bid, E, phi), eng.geominimal(bid, E, phi)
                cases.append(_case([bid], [phi.label], "affine == geominimal", A, "==", G, tol))
                cases.append(_case([bid], [phi.label], "geominimal == volume-product bound",
                                   G, "==", cf, tol))
    elif name == "isoperimetric":
        cases = []
        for bid, E in ells:
            for phi in phis or [P(2), P(-1)]:
                ref = exact(ball_functional(phi, math.sqrt(E.volume() / math.pi), 2))
                cases.append(_case([bid], [phi.label], "G(E) == G(B_E)",
                                   eng.geominimal(bid, E, phi), "==", ref, tol))
                cases.append(_case([bid], [phi.label], "Omega(E) == G(B_E)",
                                   eng.affine(bid, E, phi), "==", ref, tol))
    else:
        cases = []
        corpus = ells[:2] + golden_corpus(seed, resolution, 2, 0, 0)["smooth"]
        for bid, K in corpus:
            for phi in phis or [P(2), P(-1)]:
                for which in ("affine", "geominimal"):
                    M = eng.multi(which, [bid, bid], [K, K], [phi, phi])
                    single = eng.affine(bid, K, phi) if which == "affine" else eng.geominimal(bid, K, phi)
                    cases.append(_case([bid, bid], [phi.label] * 2,
                                       f"{which} multi^2 == single^2 at equal factors",
                                       M ** 2, "==", single ** 2, tol))
    return SuiteReport(f"{name}:equality", cases, seed, {"relative": tol}, resolution)


# ---------------------------------------------------------------------------
# suites


def _require_class(phi: OrliczFunction, allowed: Sequence[str], suite: str):
    c = classify(phi, 2)
    if c.cls not in allowed:
        raise ClassMismatch(f"{suite}: {phi.label} is {c.cls}, needs one of {list(allowed)}")
    return c


def _pairs(phis, suite):
    if len(phis) % 2:
        raise ClassMismatch(f"{suite}: Orlicz functions must come in pairs")
    return [(phis[k], phis[k + 1]) for k in range(0, len(phis), 2)]


def _ellipsoid_closed_form(bodies, phis, eng, tol, seed):
    cases = []
    for bid, E in bodies:
        if not isinstance(E, (Ellipsoid, Ball)):
            raise ClassMismatch(f"{bid}: ellipsoid-closed-form needs ellipsoids or balls")
        for phi in phis:
            _require_class(phi, ("Phi", "Psi", "ConstantBoth"), "ellipsoid-closed-form")
            cf = exact(ellipsoid_closed_form(E, phi))
            cases.append(_case([bid], [phi.label], "Omega == n phi(vrad(E polar)) |E|",
                               eng.affine(bid, E, phi), "==", cf, tol))
            cases.append(_case([bid], [phi.label], "G == n phi(vrad(E polar)) |E|",
                               eng.geominimal(bid, E, phi), "==", cf, tol))
    return cases


def _volume_product_bound(K, phi) -> float:
    return float(phi.with_dim(2)(K.polar().vrad()) * 2 * K.volume())


def _comparison(bodies, phis, eng, tol, seed):
    cases = []
    for phi in phis:
        c = _require_class(phi, ("Phi", "Psi"), "comparison")
        rel = "<=" if c.cls == "Phi" else ">="
        for bid, K in bodies:
            ids, labs = [bid], [phi.label]
            G = eng.geominimal(bid, K, phi)
            A = eng.affine_result(bid, K, phi)
            # the affine search also sees the polar of the geominimal witness
            Ar = affine_orlicz(K, phi, eng._grid(K), eng.opts, seed_witness=eng.geominimal_result(bid, K, phi))
            notes = _functional_side_note(A)
            lhs, rhs = Ar.value, G.value
            m = _margin(lhs, rel, rhs)
            ok = m >= -1e-10
            cases.append(Case(tuple(ids), tuple(labs), f"Omega {rel} G (search containment)", rel,
                              lhs, rhs, m, "Certified" if ok else "Violated",
                              _join(notes, "affine search contains the geominimal witness")))
            cases.append(_case(ids, labs, f"G {rel} S_phi", G, rel, eng.s_phi(bid, K, phi), tol))
            vp = exact(_volume_product_bound(K, phi))
            cases.append(_case(ids, labs, f"G {rel} phi(vrad(K polar)) n|K|", G, rel, vp, tol))
            cases.append(_case(ids, labs, f"Omega {rel} phi(vrad(K polar)) n|K|",
                               eng.affine(bid, K, phi), rel, vp, tol, notes))
    return cases


def _pointwise_le(phi, psi) -> bool:
    t = np.logspace(math.log10(AUDIT_RANGE[0]), math.log10(AUDIT_RANGE[1]), 2001)
    with np.errstate(all="ignore"):
        a, b = phi.raw(t), psi.raw(t)
    return bool(np.all(a <= b * (1 + 1e-12)))


def _monotonicity(bodies, phis, eng, tol, seed):
    cases = []
    for phi, psi in _pairs(phis, "monotonicity-phi"):
        c1 = _require_class(phi, ("Phi", "Psi"), "monotonicity-phi")
        c2 = _require_class(psi, ("Phi", "Psi"), "monotonicity-phi")
        labs = [phi.label, psi.label]
        if c1.cls != c2.cls:
            raise ClassMismatch(f"monotonicity-phi: {phi.label} and {psi.label} are in different classes")
        gate = _pointwise_le(phi, psi)
        for bid, K in bodies:
            for q, get in (("Omega", eng.affine), ("G", eng.geominimal)):
                if not gate:
                    cases.append(_inconclusive([bid], labs, f"{q}_phi <= {q}_psi", "<=", math.nan,
                                               math.nan, "pointwise phi <= psi not established"))
                    continue
                cases.append(_case([bid], labs, f"{q}_phi <= {q}_psi", get(bid, K, phi), "<=",
                                   get(bid, K, psi), tol))
    return cases


def _conditions(phi, psi):
    """Conditions (a)-(f) that hold for the pair, with the audit of H."""
    c1, c2 = classify(phi, 2).cls, classify(psi, 2).cls
    try:
        H = audit_composition(phi, psi)
    except (RangeError, OrliczError):
        return [], None
    power_pair = phi.kind == "power" and psi.kind == "power"
    out = []
    if c1 == "Phi" and c2 == "Psi" and H.increasing:
        out.append("a")
    if c1 == "Phi" and c2 == "Phi" and H.decreasing:
        out.append("b")
    if c1 == c2 and H.increasing and H.concave:
        out.append("c")
    if c1 == "Psi" and c2 == "Phi" and H.increasing:
        out.append("d")
    if c1 != c2 and H.decreasing and H.convex:
        out.append("e" if power_pair else "e?")
    if c1 == c2 and H.increasing and H.convex:
        out.append("f")
    return out, H


def _cyclic(bodies, phis, eng, tol, seed):
    cases = []
    for phi, psi in _pairs(phis, "cyclic-monotonicity"):
        _require_class(phi, ("Phi", "Psi"), "cyclic-monotonicity")
        _require_class(psi, ("Phi", "Psi"), "cyclic-monotonicity")
        labs = [phi.label, psi.label]
        conds, audit = _conditions(phi, psi)
        if not conds:
            for bid, _ in bodies:
                cases.append(_inconclusive([bid], labs, "monotonicity conditions (a)-(f)", "<=", math.nan,
                                           math.nan, "no condition established by the H audit"))
            continue

        def H(y, phi=phi, psi=psi):
            with np.errstate(all="ignore"):
                return float(phi.raw(psi.inverse(np.asarray(y, dtype=float))))

        for cond in conds:
            rel = "<=" if cond in ("a", "b", "c") else ">="
            for bid, K in bodies:
                nK = 2 * K.volume()
                for q, get in (("Omega", eng.affine), ("G", eng.geominimal)):
                    claim = f"({cond[0]}) {q}_phi/n|K| {rel} H({q}_psi/n|K|)"
                    if cond == "e?":
                        cases.append(_inconclusive([bid], labs, claim, rel, math.nan, math.nan,
                                                   "condition (e) is only run on power-law pairs"))
                        continue
                    lhs = get(bid, K, phi).scaled(1.0 / nK)
                    x = get(bid, K, psi).scaled(1.0 / nK)
                    try:
                        rhs = x.mapped(H, audit.increasing)
                    except OrliczError:
                        cases.append(_inconclusive([bid], labs, claim, rel, lhs.value, math.nan,
                                                   f"{q}_psi/n|K| = {x.value!r} is a limit outside the range of psi"))
                        continue
                    cases.append(_case([bid], labs, claim, lhs, rel, rhs, tol))
    return cases


def _isoperimetric(bodies, phis, eng, tol, seed):
    cases = []
    n = 2
    for phi in phis:
        c = _require_class(phi, ("Phi", "Psi"), "isoperimetric")
        for bid, K in bodies:
            ids, labs = [bid], [phi.label]
            rK = math.sqrt(K.volume() / math.pi)
            ball = exact(ball_functional(phi, rK, n))
            G, A = eng.geominimal(bid, K, phi), eng.affine(bid, K, phi)
            if c.cls == "Phi":
                rpol = 1.0 / K.polar().vrad()
                ball_pol = exact(ball_functional(phi, rpol, n))
                cases.append(_case(ids, labs, "G(K) <= G([B_(K polar)] polar)", G, "<=", ball_pol, tol))
                cases.append(_case(ids, labs, "Omega(K) <= G([B_(K polar)] polar)", A, "<=", ball_pol, tol))
                if c.increasing:
                    cases.append(_case(ids, labs, "G(K) <= G(B_K)", G, "<=", ball, tol))
                    cases.append(_case(ids, labs, "Omega(K) <= G(B_K)", A, "<=", ball, tol))
            else:
                cases.append(_case(ids, labs, "G(K) >= G(B_K)", G, ">=", ball, tol))
                cases.append(_case(ids, labs, "Omega(K) >= G(B_K)", A, ">=", ball, tol))
    # centroid-free variants on translated bodies
    concave_inc = [p for p in phis if _is_power_between(p, 0.0, 1.0)]
    convex_dec = [p for p in phis if classify(p, 2).cls == "Psi" and _convex_decreasing(p)]
    movable = [(bid, K) for bid, K in bodies if isinstance(K, SmoothSampled)][:5]
    for bid, K in movable:
        rng = stream(seed, "isoperimetric", "shift", bid)
        z = rng.normal(size=2)
        z *= 0.3 * float(np.min(K.h)) / np.linalg.norm(z)
        Kz = K.translate(z)
        zid = f"{bid}+shift"
        ball = lambda phi: exact(ball_functional(phi, math.sqrt(Kz.volume() / math.pi), 2))  # noqa: E731
        for phi in concave_inc:
            cases.append(_case([zid], [phi.label], "G(K) <= G(B_K), centroid off origin",
                               eng.geominimal(zid, Kz, phi), "<=", ball(phi), tol))
        for phi in convex_dec:
            cases.append(_case([zid], [phi.label], "G(K) >= G(B_K), centroid off origin",
                               eng.geominimal(zid, Kz, phi), ">=", ball(phi), tol))
    return cases


def _is_power_between(phi, lo, hi) -> bool:
    return phi.kind == "power" and lo < phi.p <= hi


def _convex_decreasing(phi) -> bool:
    t = np.logspace(-3, 3, 513)
    y = phi.raw(t)
    slope = np.diff(y) / np.diff(t)
    return bool(np.all(slope <= 0) and np.all(np.diff(slope) >= -1e-12 * np.abs(slope[:-1])))


def _santalo_ok(phi) -> bool:
    """``phi(t) phi(s) <= phi(1)^2`` whenever ``s t <= 1``, on a sample."""
    t = np.logspace(-4, 4, 161)
    c = np.logspace(-4, 0, 41)
    T, C = np.meshgrid(t, c)
    with np.errstate(all="ignore"):
        lhs = phi.raw(T) * phi.raw(C / T)
    one = float(phi.raw(1.0)) ** 2
    return bool(np.all(lhs <= one * (1 + 1e-12)))


def _santalo(bodies, phis, eng, tol, seed):
    cases = []
    n = 2
    for phi in phis:
        c = _require_class(phi, ("Phi", "Psi"), "santalo-style")
        ballsq = exact((n * ball_volume(n) * float(phi.raw(1.0))) ** 2)
        qualifies = _santalo_ok(phi) if c.cls == "Phi" else True
        for bid, K in bodies:
            Kp = K.polar()
            pid = f"{bid}:polar"
            ids, labs = [bid], [phi.label]
            vp = exact(float(phi.with_dim(2)(K.vrad()) * phi.with_dim(2)(Kp.vrad()))
                       * n * n * K.volume() * Kp.volume())
            AA = eng.affine(bid, K, phi) * eng.affine(pid, Kp, phi)
            GG = eng.geominimal(bid, K, phi) * eng.geominimal(pid, Kp, phi)
            if c.cls == "Phi":
                cases.append(_case(ids, labs, "G(K) G(K polar) <= volume-product bound", GG, "<=", vp, tol))
                if not qualifies:
                    cases.append(_inconclusive(ids, labs, "volume-product bound <= [G(B)]^2", "<=",
                                               vp.value, ballsq.value,
                                               "phi(t) phi(s) <= phi(1)^2 for st <= 1 not established"))
                    continue
                cases.append(_case(ids, labs, "volume-product bound <= [G(B)]^2", vp, "<=", ballsq, tol))
                cases.append(_case(ids, labs, "Omega(K) Omega(K polar) <= [Omega(B)]^2", AA, "<=", ballsq, tol))
                cases.append(_case(ids, labs, "G(K) G(K polar) <= [G(B)]^2", GG, "<=", ballsq, tol))
            else:
                cases.append(_case(ids, labs, "G(K) G(K polar) >= volume-product bound", GG, ">=", vp, tol))
                cases.append(_case(ids, labs, "Omega(K) Omega(K polar) >= volume-product bound",
                                   AA, ">=", vp, tol))
                cases.append(_inconclusive(ids, labs, "volume-product bound >= A c^n [G(B)]^2", ">=",
                                           vp.value, ballsq.value,
                                           "inverse Santalo constant unknown; reported only"))
    return cases


def _affine_invariance(bodies, phis, eng, tol, seed):
    cases = []
    transformed = []
    for k, (bid, K) in enumerate(bodies):
        T = random_sl(2, int(stream(seed, "affine-invariance", bid).integers(2**32)))
        transformed.append((bid, K, f"{bid}@T{k}", apply_sl(K, T)))
    for phi in phis:
        _require_class(phi, ("Phi", "Psi"), "affine-invariance")
        for bid, K, tid, TK in transformed:
            labs = [phi.label]
            cases.append(_case([bid, tid], labs, "Omega(TK) == Omega(K)",
                               eng.affine(tid, TK, phi), "==", eng.affine(bid, K, phi), tol))
            cases.append(_case([bid, tid], labs, "G(TK) == G(K)",
                               eng.geominimal(tid, TK, phi), "==", eng.geominimal(bid, K, phi), tol))
        # mixed functionals on consecutive pairs
        for (b1, K1, t1, TK1), (b2, K2, t2, TK2) in list(zip(transformed[0::2], transformed[1::2]))[:2]:
            T = random_sl(2, int(stream(seed, "affine-invariance", "pair", b1, b2).integers(2**32)))
            TK1, TK2 = apply_sl(K1, T), apply_sl(K2, T)
            t1, t2 = f"{b1}@S", f"{b2}@S"
            for which in ("affine", "geominimal"):
                lhs = eng.multi(which, [t1, t2], [TK1, TK2], [phi, phi])
                rhs = eng.multi(which, [b1, b2], [K1, K2], [phi, phi])
                cases.append(_case([b1, b2], [phi.label] * 2, f"{which} multi(TK1, TK2) == multi(K1, K2)",
                                   lhs, "==", rhs, tol))
    return cases


def _alexander_fenchel(bodies, phis, eng, tol, seed):
    cases = []
    pairs = list(zip(bodies[0::2], bodies[1::2]))
    for phi1, phi2 in _pairs(phis, "alexander-fenchel"):
        c1 = _require_class(phi1, ("Phi", "Psi"), "alexander-fenchel")
        c2 = _require_class(phi2, ("Phi", "Psi"), "alexander-fenchel")
        if c1.cls != c2.cls:
            raise ClassMismatch("alexander-fenchel: both functions must be in the same class")
        labs = [phi1.label, phi2.label]
        for (b1, K1), (b2, K2) in pairs:
            ids = [b1, b2]
            for which, single in (("affine", eng.affine), ("geominimal", eng.geominimal)):
                M = eng.multi(which, ids, [K1, K2], [phi1, phi2])
                prod = single(b1, K1, phi1) * single(b2, K2, phi2)
                q = "Omega" if which == "affine" else "G"
                cases.append(_case(ids, labs, f"{q}(K1,K2)^2 <= {q}(K1) {q}(K2)", M ** 2, "<=", prod, tol))
            if c1.cls == "Phi":
                Mg = eng.multi("geominimal", ids, [K1, K2], [phi1, phi2])
                Ma = eng.multi("affine", ids, [K1, K2], [phi1, phi2])
                S = eng.s_phi(b1, K1, phi1) * eng.s_phi(b2, K2, phi2)
                cases.append(_case(ids, labs, "G(K1,K2)^2 <= S_phi1(K1) S_phi2(K2)", Mg ** 2, "<=", S, tol))
                cases.append(_case(ids, labs, "Omega(K1,K2)^2 <= S_phi1(K1) S_phi2(K2)", Ma ** 2, "<=", S, tol))
                pol = exact(ball_functional(phi1, 1.0 / K1.polar().vrad(), 2)
                            * ball_functional(phi2, 1.0 / K2.polar().vrad(), 2))
                cases.append(_case(ids, labs, "G(K1,K2)^2 <= prod G([B_(Ki polar)] polar)",
                                   Mg ** 2, "<=", pol, tol))
                if c1.increasing and c2.increasing:
                    bk = exact(ball_functional(phi1, math.sqrt(K1.volume() / math.pi), 2)
                               * ball_functional(phi2, math.sqrt(K2.volume() / math.pi), 2))
                    cases.append(_case(ids, labs, "G(K1,K2)^2 <= prod G(B_Ki)", Mg ** 2, "<=", bk, tol))
    return cases


def _ith_mixed(bodies, phis, eng, tol, seed):
    cases = []
    n = 2
    pairs = list(zip(bodies[0::2], bodies[1::2]))
    ell = Ellipsoid(np.array([[1.4, 0.2], [0.0, 1.0 / 1.4]]))
    for phi1, phi2 in _pairs(phis, "ith-mixed-cyclic"):
        c1 = _require_class(phi1, ("Phi", "Psi"), "ith-mixed-cyclic")
        c2 = _require_class(phi2, ("Phi", "Psi"), "ith-mixed-cyclic")
        if c1.cls != c2.cls:
            raise ClassMismatch("ith-mixed-cyclic: both functions must be in the same class")
        labs = [phi1.label, phi2.label]
        for (b1, K), (b2, L) in pairs:
            ids = [b1, b2]
            for which, single in (("affine", eng.affine), ("geominimal", eng.geominimal)):
                q = "Omega" if which == "affine" else "G"
                V = {i: eng.ith(which, ids, K, L, phi1, phi2, i) for i in (0, 1, 2)}
                s1, s2 = single(b1, K, phi1), single(b2, L, phi2)
                cases.append(_case(ids, labs, f"{q}_0(K,L) == {q}_phi1(K)", V[0], "==", s1, tol))
                cases.append(_case(ids, labs, f"{q}_2(K,L) == {q}_phi2(L)", V[2], "==", s2, tol))
                if c1.cls == "Psi":
                    cases.append(_case(ids, labs, f"{q}_1^2 <= {q}_0 {q}_2", V[1] ** 2, "<=",
                                       V[0] * V[2], tol))
                    cases.append(_case(ids, labs, f"{q}_1^2 <= {q}_phi1(K) {q}_phi2(L)", V[1] ** 2, "<=",
                                       s1 * s2, tol))
                    Vm = eng.ith(which, ids, K, L, phi1, phi2, -1)
                    cases.append(_case(ids, labs, f"{q}_-1^2 >= {q}_phi1(K)^3 {q}_phi2(L)^-1",
                                       Vm ** 2, ">=", (s1 ** 3) * (s2 ** -1), tol))
                else:
                    bk = exact(ball_functional(phi1, math.sqrt(K.volume() / math.pi), n)) ** (n - 1) * \
                        exact(ball_functional(phi2, math.sqrt(L.volume() / math.pi), n)) ** 1
                    if which == "geominimal" and c1.increasing and c2.increasing:
                        cases.append(_case(ids, labs, "G_1^2 <= G(B_K) G(B_L)", V[1] ** 2, "<=", bk, tol))
                    pol = exact(ball_functional(phi1, 1.0 / K.polar().vrad(), n)) * \
                        exact(ball_functional(phi2, 1.0 / L.polar().vrad(), n))
                    cases.append(_case(ids, labs, f"{q}_1^2 <= G([B_(K polar)] polar) G([B_(L polar)] polar)",
                                       V[1] ** 2, "<=", pol, tol))
            if c1.cls == "Psi":
                eid = "ellipsoid-ith"
                Vm = eng.ith("geominimal", [b1, eid], K, ell, phi1, phi2, -1)
                rhs = exact(ball_functional(phi1, math.sqrt(K.volume() / math.pi), n)) ** 3 * \
                    exact(ellipsoid_closed_form(ell, phi2)) ** -1
                cases.append(_case([b1, eid], labs, "G_-1(K,E)^2 >= G(B_K)^3 G(E)^-1", Vm ** 2, ">=", rhs, tol))
    return cases


def _lp_consistency(bodies, phis, eng, tol, seed):
    cases = []
    n = 2
    for phi in phis:
        if phi.kind != "power":
            raise ClassMismatch("lp-consistency takes power functions")
        p = phi.p
        c = _require_class(phi, ("Phi", "Psi"), "lp-consistency")
        for bid, K in bodies:
            A = eng.affine(bid, K, phi)
            asp = lp_affine_closed_form(K, p, eng._grid(K))
            cases.append(_case([bid], [phi.label], "(n omega_n)^(p/n) Omega_p == as_p^((n+p)/n)",
                               A.scaled((n * ball_volume(n)) ** (p / n)), "==",
                               exact(asp ** ((n + p) / n)), tol))
            if p >= 1 and c.cls == "Phi":
                r = eng.geominimal_result(bid, K, phi)
                Gt = orlicz_to_lp(r.value, p, n)
                Gl = lutwak_gp(K, r.witness, p, eng._grid(K))
                cases.append(_case([bid], [phi.label], "G~_p^(n+p) == (n omega_n)^p G_p^n at the witness",
                                   exact(Gt ** (n + p)), "==", exact((n * ball_volume(n)) ** p * Gl ** n), tol))
    return cases


_SUITE_FUNCS = {
    "ellipsoid-closed-form": _ellipsoid_closed_form,
    "comparison": _comparison,
    "monotonicity-phi": _monotonicity,
    "cyclic-monotonicity": _cyclic,
    "isoperimetric": _isoperimetric,
    "santalo-style": _santalo,
    "affine-invariance": _affine_invariance,
    "alexander-fenchel": _alexander_fenchel,
    "ith-mixed-cyclic": _ith_mixed,
    "lp-consistency": _lp_consistency,
}


__all__ = ["SUITES", "Case", "SuiteReport", "Bound", "run_suite", "equality_witness", "golden_corpus"]
