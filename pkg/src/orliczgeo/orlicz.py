"""Orlicz functions ``phi: (0, inf) -> (0, inf)`` and their class audit.

The class of ``phi`` is decided by ``F(t) = phi(t^(-1/n))``:

* ``Phi``: F constant or strictly convex (functionals are infima);
* ``Psi``: F constant or increasing and strictly concave (functionals are suprema).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from .errors import (
    ClassificationConflict,
    DomainError,
    NearDegenerate,
    ParseError,
    RangeError,
)

BUILTIN_KINDS = ("power", "constant", "arctan_inv_n", "log1p_inv_n", "exp_neg_inv_n")

AUDIT_RANGE = (1e-4, 1e4)
AUDIT_SAMPLES = 512
MIN_SAMPLES = 64
# roundoff multiplier for divided differences
ROUNDOFF = 1e3 * np.finfo(float).eps
CONSTANT_TOL = 1e-12
DEGENERATE_TOL = 1e-10


@dataclass(frozen=True)
class Classification:
    cls: str  # Phi | Psi | Neither | ConstantBoth
    monotone: str  # increasing | strictly_increasing | decreasing | strictly_decreasing | none
    invertible: bool

    @property
    def increasing(self) -> bool:
        return self.monotone in ("increasing", "strictly_increasing")

    @property
    def decreasing(self) -> bool:
        return self.monotone in ("decreasing", "strictly_decreasing")

    def to_dict(self) -> dict:
        return {"class": self.cls, "monotone": self.monotone, "invertible": self.invertible}


@dataclass(frozen=True, eq=False)
class OrliczFunction:
    """A positive function on ``(0, inf)``.

    Built-ins are ``power(p)``, ``constant(a)`` and the three inverse-power
    families ``arctan_inv_n``, ``log1p_inv_n``, ``exp_neg_inv_n`` whose
    exponent is ``dim``.  Anything else is ``custom`` with a callable.
    """

    kind: str
    p: float = 0.0
    a: float = 1.0
    dim: int = 2
    func: Optional[Callable] = None
    name: Optional[str] = None

    def __post_init__(self):
        if self.kind not in BUILTIN_KINDS + ("custom",):
            raise ParseError(f"unknown phi kind {self.kind!r}")
        if self.kind == "custom" and self.func is None:
            raise ParseError("custom phi needs a callable")
        if self.kind == "constant" and not self.a > 0:
            raise RangeError("constant phi must be positive")

    # constructors -------------------------------------------------------
    @classmethod
    def power(cls, p: float, dim: int = 2) -> "OrliczFunction":
        return cls("power", p=float(p), dim=dim)

    @classmethod
    def constant(cls, a: float, dim: int = 2) -> "OrliczFunction":
        return cls("constant", a=float(a), dim=dim)

    @classmethod
    def arctan_inv_n(cls, dim: int = 2) -> "OrliczFunction":
        return cls("arctan_inv_n", dim=dim)

    @classmethod
    def log1p_inv_n(cls, dim: int = 2) -> "OrliczFunction":
        return cls("log1p_inv_n", dim=dim)

    @classmethod
    def exp_neg_inv_n(cls, dim: int = 2) -> "OrliczFunction":
        return cls("exp_neg_inv_n", dim=dim)

    @classmethod
    def custom(cls, func: Callable, name: str = "custom", dim: int = 2) -> "OrliczFunction":
        return cls("custom", func=func, name=name, dim=dim)

    def with_dim(self, dim: int) -> "OrliczFunction":
        if dim == self.dim:
            return self
        return OrliczFunction(self.kind, self.p, self.a, dim, self.func, self.name)

    @property
    def label(self) -> str:
        if self.kind == "power":
            return f"power({self.p:g})"
        if self.kind == "constant":
            return f"constant({self.a:g})"
        if self.kind == "custom":
            return self.name or "custom"
        return self.kind

    # evaluation ---------------------------------------------------------
    def raw(self, t) -> np.ndarray:
        """Unchecked vectorized evaluation (may return 0 or inf)."""
        t = np.asarray(t, dtype=float)
        n = self.dim
        with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
            if self.kind == "power":
                return t**self.p
            if self.kind == "constant":
                return np.full(t.shape, self.a)
            if self.kind == "arctan_inv_n":
                return np.arctan(t ** (-n))
            if self.kind == "log1p_inv_n":
                return np.log1p(t ** (-n))
            if self.kind == "exp_neg_inv_n":
                return np.exp(-(t ** (-n)))
            return np.asarray(np.vectorize(self.func, otypes=[float])(t), dtype=float)

    def __call__(self, t):
        return eval_phi(self, t)

    def derivative(self, t) -> np.ndarray:
        """``phi'(t)``; analytic for built-ins, central differences otherwise."""
        t = np.asarray(t, dtype=float)
        n = self.dim
        with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
            if self.kind == "power":
                return self.p * t ** (self.p - 1.0)
            if self.kind == "constant":
                return np.zeros(t.shape)
            s = t ** (-n)
            if self.kind == "arctan_inv_n":
                return -n * s / t / (1.0 + s * s)
            if self.kind == "log1p_inv_n":
                return -n * s / t / (1.0 + s)
            if self.kind == "exp_neg_inv_n":
                return n * s / t * np.exp(-s)
            h = 1e-6 * t
            return (self.raw(t + h) - self.raw(t - h)) / (2.0 * h)

    def F_derivative(self, s) -> np.ndarray:
        """``F'(s)`` for ``F(s) = phi(s^(-1/n))``."""
        s = np.asarray(s, dtype=float)
        n = self.dim
        with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
            if self.kind == "power":
                q = -self.p / n
                return q * s ** (q - 1.0)
            if self.kind == "constant":
                return np.zeros(s.shape)
            if self.kind == "arctan_inv_n":
                return 1.0 / (1.0 + s * s)
            if self.kind == "log1p_inv_n":
                return 1.0 / (1.0 + s)
            if self.kind == "exp_neg_inv_n":
                return -np.exp(-s)
            t = s ** (-1.0 / n)
            return self.derivative(t) * (-t / (n * s))

    def inverse(self, y) -> np.ndarray:
        """``phi^{-1}(y)`` for strictly monotone ``phi``."""
        y = np.asarray(y, dtype=float)
        n = self.dim
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            if self.kind == "power":
                if self.p == 0:
                    raise DomainError("power(0) is not invertible")
                out = y ** (1.0 / self.p)
            elif self.kind == "constant":
                raise DomainError("constant phi is not invertible")
            elif self.kind == "arctan_inv_n":
                out = np.where((y > 0) & (y < np.pi / 2), np.tan(y) ** (-1.0 / n), np.nan)
            elif self.kind == "log1p_inv_n":
                out = np.where(y > 0, np.expm1(y) ** (-1.0 / n), np.nan)
            elif self.kind == "exp_neg_inv_n":
                out = np.where((y > 0) & (y < 1), (-np.log(y)) ** (-1.0 / n), np.nan)
            else:
                out = np.vectorize(self._custom_inverse, otypes=[float])(y)
        if np.any(~np.isfinite(out)) or np.any(out <= 0):
            raise DomainError("value outside the range of phi")
        return out

    def _custom_inverse(self, y: float) -> float:
        def g(x):
            return float(self.raw(np.exp(x))) - y

        lo, hi = -1.0, 1.0
        for _ in range(60):
            if np.sign(g(lo)) != np.sign(g(hi)):
                return float(np.exp(brentq(g, lo, hi, xtol=1e-14)))
            lo, hi = 2 * lo, 2 * hi
        return float("nan")

    # range ends -----------------------------------------------------------
    @property
    def inf_value(self) -> float:
        """``inf phi`` over ``(0, inf)``."""
        if self.kind == "constant":
            return self.a
        if self.kind == "power" and self.p == 0:
            return 1.0
        if self.kind in ("power", "arctan_inv_n", "log1p_inv_n", "exp_neg_inv_n"):
            return 0.0
        t = np.logspace(-8, 8, 2001)
        return float(np.min(self.raw(t)))

    @property
    def sup_value(self) -> float:
        """``sup phi`` over ``(0, inf)``."""
        if self.kind == "constant":
            return self.a
        if self.kind == "power":
            return 1.0 if self.p == 0 else float("inf")
        if self.kind == "arctan_inv_n":
            return float(np.pi / 2)
        if self.kind == "log1p_inv_n":
            return float("inf")
        if self.kind == "exp_neg_inv_n":
            return 1.0
        t = np.logspace(-8, 8, 2001)
        return float(np.max(self.raw(t)))

    # serialization --------------------------------------------------------
    def to_dict(self) -> dict:
        if self.kind == "power":
            d = {"kind": "power", "p": self.p}
        elif self.kind == "constant":
            d = {"kind": "constant", "a": self.a}
        elif self.kind == "custom":
            raise ParseError("custom phi cannot be serialized")
        else:
            d = {"kind": self.kind}
        if self.dim != 2:
            d["dim"] = self.dim
        return d

    @classmethod
    def from_dict(cls, data: dict, dim: Optional[int] = None) -> "OrliczFunction":
        try:
            kind = data["kind"]
            d = int(data.get("dim", dim if dim is not None else 2))
            if kind == "power":
                return cls.power(float(data["p"]), d)
            if kind == "constant":
                return cls.constant(float(data["a"]), d)
            if kind in BUILTIN_KINDS:
                return cls(kind, dim=d)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad phi spec {data!r}: {exc}") from exc
        raise ParseError(f"unknown phi kind {data.get('kind')!r}")


def eval_phi(phi: OrliczFunction, t):
    """Checked evaluation: ``t > 0`` and a finite positive result."""
    arr = np.asarray(t, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("phi is defined on (0, inf) only")
    out = phi.raw(arr)
    if np.any(~np.isfinite(out)) or np.any(out <= 0):
        raise RangeError(f"{phi.label} is not finite and positive on the given arguments")
    return float(out) if np.ndim(t) == 0 else out


def F_transform(phi: OrliczFunction, t, dim: Optional[int] = None):
    """``F(t) = phi(t^(-1/n))``."""
    n = phi.dim if dim is None else dim
    arr = np.asarray(t, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("F is defined on (0, inf) only")
    return eval_phi(phi, arr ** (-1.0 / n)) if np.ndim(t) else eval_phi(phi, float(arr) ** (-1.0 / n))


# ---------------------------------------------------------------------------
# audit


@dataclass(frozen=True)
class Audit:
    constant: bool
    convex: bool  # strictly
    concave: bool  # strictly
    increasing: bool
    decreasing: bool
    strictly_increasing: bool
    strictly_decreasing: bool
    proportional_to_t: bool


def audit_samples(t: np.ndarray, F: np.ndarray) -> Audit:
    """Shape audit of samples ``F(t_i)`` on an increasing abscissa."""
    ok = np.isfinite(F) & (np.abs(F) > 1e-300)
    t, F = t[ok], F[ok]
    if len(t) < MIN_SAMPLES:
        raise RangeError(f"only {len(t)} usable samples (need {MIN_SAMPLES})")
    scale = np.abs(F)
    h = np.diff(t)
    d1 = np.diff(F) / h
    tol1 = ROUNDOFF * np.maximum(scale[:-1], scale[1:]) / h
    local = np.maximum(np.maximum(scale[:-2], scale[1:-1]), scale[2:])
    d2 = 2.0 * np.diff(d1) / (t[2:] - t[:-2])
    tol2 = ROUNDOFF * local / (h[:-1] * h[1:])

    constant = bool(np.max(np.abs(F - F[0])) <= CONSTANT_TOL * abs(F[0]))
    ratio = F / t
    proportional = bool(np.max(np.abs(ratio - ratio[0])) <= DEGENERATE_TOL * abs(ratio[0]))
    return Audit(
        constant=constant,
        convex=bool(np.all(d2 > tol2)) and not constant,
        concave=bool(np.all(d2 < -tol2)) and not constant,
        increasing=bool(np.all(d1 >= -tol1)),
        decreasing=bool(np.all(d1 <= tol1)),
        strictly_increasing=bool(np.all(d1 > tol1)),
        strictly_decreasing=bool(np.all(d1 < -tol1)),
        proportional_to_t=proportional,
    )


def _class_from_audit(a: Audit) -> str:
    if a.constant:
        return "ConstantBoth"
    if a.convex:
        return "Phi"
    if a.concave and a.increasing:
        return "Psi"
    return "Neither"


def _monotone_label(increasing, strict_inc, decreasing, strict_dec) -> str:
    if strict_inc:
        return "strictly_increasing"
    if strict_dec:
        return "strictly_decreasing"
    if increasing:
        return "increasing"
    if decreasing:
        return "decreasing"
    return "none"


def _analytic_label(phi: OrliczFunction, n: int) -> Optional[Classification]:
    if phi.kind == "constant" or (phi.kind == "power" and phi.p == 0):
        return Classification("ConstantBoth", "increasing", False)
    if phi.kind == "power":
        p = phi.p
        if p == -n:
            raise NearDegenerate(f"power({p:g}) is proportional to t^-n")
        if p > 0:
            return Classification("Phi", "strictly_increasing", True)
        if p < -n:
            return Classification("Phi", "strictly_decreasing", True)
        return Classification("Psi", "strictly_decreasing", True)
    if phi.kind in ("arctan_inv_n", "log1p_inv_n"):
        return Classification("Psi", "strictly_decreasing", True)
    if phi.kind == "exp_neg_inv_n":
        return Classification("Phi", "strictly_increasing", True)
    return None


_CACHE: dict = {}


def classify(phi: OrliczFunction, dim: Optional[int] = None, samples: int = AUDIT_SAMPLES) -> Classification:
    """Class and monotonicity of ``phi`` in dimension ``dim``.

    Built-in kinds carry an analytic label; the numerical audit always runs
    and a disagreement raises :class:`ClassificationConflict`.
    """
    n = phi.dim if dim is None else int(dim)
    phi = phi.with_dim(n)
    if samples < MIN_SAMPLES:
        raise ValueError(f"samples must be >= {MIN_SAMPLES}")
    key = (phi.kind, phi.p, phi.a, n, samples, id(phi.func))
    if phi.kind != "custom" and key in _CACHE:
        return _CACHE[key]
    analytic = _analytic_label(phi, n)
    t = np.logspace(np.log10(AUDIT_RANGE[0]), np.log10(AUDIT_RANGE[1]), samples)
    F = phi.raw(t ** (-1.0 / n))
    a = audit_samples(t, F)
    if a.proportional_to_t:
        raise NearDegenerate(f"{phi.label}: F is proportional to t (phi ~ t^-n)")
    # phi increasing in s = t^(-1/n)  <=>  F decreasing in t
    mono = _monotone_label(a.decreasing, a.strictly_decreasing, a.increasing, a.strictly_increasing)
    audited = Classification(
        _class_from_audit(a), mono, a.strictly_increasing or a.strictly_decreasing
    )
    if analytic is not None:
        if analytic.cls != audited.cls or (
            analytic.cls != "ConstantBoth" and analytic.monotone != audited.monotone
        ):
            raise ClassificationConflict(
                f"{phi.label}: analytic label {analytic.to_dict()} vs audit {audited.to_dict()}"
            )
        result = analytic
    else:
        result = audited
    if phi.kind != "custom":
        _CACHE[key] = result
    return result


def composition(phi: OrliczFunction, psi: OrliczFunction) -> Callable:
    """``H = phi o psi^{-1}`` as a vectorized callable."""

    def H(t):
        return phi.raw(psi.inverse(t))

    return H


@dataclass(frozen=True)
class ShapeAudit:
    increasing: bool
    decreasing: bool
    convex: bool
    concave: bool

    def to_dict(self) -> dict:
        return dict(increasing=self.increasing, decreasing=self.decreasing,
                    convex=self.convex, concave=self.concave)


def audit_composition(phi: OrliczFunction, psi: OrliczFunction, samples: int = AUDIT_SAMPLES) -> ShapeAudit:
    """Monotonicity and convexity of ``H = phi o psi^{-1}`` on the range of ``psi``.

    The abscissa is ``psi`` evaluated on the standard audit range, so ``H`` is
    probed exactly where it is used.
    """
    s = np.logspace(np.log10(AUDIT_RANGE[0]), np.log10(AUDIT_RANGE[1]), samples)
    y = np.unique(psi.raw(s))
    y = y[np.isfinite(y) & (y > 0)]
    # interior of psi's range; drop values too close to a range end for the inverse
    y = y[(y > y.min() * (1 + 1e-9)) & (y < y.max() * (1 - 1e-9))]
    if len(y) < MIN_SAMPLES:
        raise RangeError("psi has too narrow a range to audit H")
    y = np.geomspace(y.min(), y.max(), samples)
    H = phi.raw(psi.inverse(y))
    a = audit_samples(y, H)
    return ShapeAudit(a.increasing and not a.constant, a.decreasing and not a.constant,
                      a.convex, a.concave)
