"""Convex and star body representations.

Every body knows its support and radial functions, its polar, volume,
centroid, image under a linear map and (where available) its surface area
measure.  All bodies are immutable and assume the origin is interior.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import pi
from typing import Optional, Union

import numpy as np

from ._hull import Facets, fan_volumes, polytope_facets
from .errors import (
    DegenerateSample,
    DimensionMismatch,
    MissingCurvature,
    NotConvexProfile,
    NotUnimodular,
    OriginNotInterior,
    UnsupportedDimension,
    UnsupportedRepresentation,
)
from .spheregrid import SphereGrid, ball_volume, build_grid

DEGENERATE_FACET = 1e-12


def _unit(u, dim=None) -> np.ndarray:
    u = np.atleast_2d(np.asarray(u, dtype=float))
    if dim is not None and u.shape[1] != dim:
        raise DimensionMismatch(f"expected direction(s) in R^{dim}, got {u.shape[1]} components")
    norms = np.linalg.norm(u, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-10):
        raise ValueError("directions must be unit vectors")
    return u


def _squeeze(values, u) -> Union[float, np.ndarray]:
    if np.ndim(u) == 1:
        return float(values[0])
    return values


def _check_positive(values, what: str):
    if np.any(~np.isfinite(values)) or np.any(values <= 0):
        raise OriginNotInterior(f"{what} is not positive: origin is not interior")
    return values


# ---------------------------------------------------------------------------
# surface area measures


@dataclass(frozen=True, eq=False)
class Atomic:
    """Discrete surface area measure: one atom per polytope facet."""

    normals: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        normals = np.asarray(self.normals, dtype=float)
        masses = np.asarray(self.masses, dtype=float)
        if np.any(masses <= 0) or not np.all(np.isfinite(masses)):
            raise ValueError("atom masses must be finite and positive")
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "masses", masses)

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    @property
    def directions(self) -> np.ndarray:
        return self.normals

    @property
    def weights(self) -> np.ndarray:
        return self.masses

    @property
    def total(self) -> float:
        return float(self.masses.sum())

    @property
    def provenance(self) -> str:
        return f"atoms:{len(self.masses)}"


@dataclass(frozen=True, eq=False)
class Density:
    """Absolutely continuous surface area measure ``f dsigma`` on a grid."""

    grid: SphereGrid
    f: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.f, dtype=float)
        if f.shape != (self.grid.size,):
            raise DimensionMismatch("one curvature value per grid node required")
        if np.any(f <= 0) or not np.all(np.isfinite(f)):
            raise NotConvexProfile("curvature values must be finite and positive")
        object.__setattr__(self, "f", f)

    @property
    def dim(self) -> int:
        return self.grid.dim

    @property
    def directions(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def weights(self) -> np.ndarray:
        return self.f * self.grid.weights

    @property
    def total(self) -> float:
        return float(np.sum(self.weights))

    @property
    def provenance(self) -> str:
        return f"grid:{self.grid.dim}x{self.grid.size}"


SurfaceAreaMeasure = Union[Atomic, Density]


# ---------------------------------------------------------------------------
# SL(n)


@dataclass(frozen=True, eq=False)
class SLTransform:
    matrix: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.matrix, dtype=float)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise DimensionMismatch("SL transform must be a square matrix")
        if abs(abs(np.linalg.det(t)) - 1.0) > 1e-10:
            raise NotUnimodular(f"|det T| = {abs(np.linalg.det(t))!r}, expected 1")
        object.__setattr__(self, "matrix", t)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _as_matrix(T) -> np.ndarray:
    if isinstance(T, SLTransform):
        return T.matrix
    return SLTransform(np.asarray(T, dtype=float)).matrix


# ---------------------------------------------------------------------------
# bodies


class ConvexBody:
    """Common interface; see the concrete representations below."""

    dim: int

    def support(self, u):
        raise NotImplementedError

    def radial(self, u):
        raise NotImplementedError

    def polar(self) -> "ConvexBody":
        raise NotImplementedError

    def volume(self) -> float:
        raise NotImplementedError

    def centroid(self) -> np.ndarray:
        raise NotImplementedError

    def translate(self, z) -> "ConvexBody":
        raise NotImplementedError

    def apply_sl(self, T) -> "ConvexBody":
        raise NotImplementedError

    def surface_area_measure(self, grid: Optional[SphereGrid] = None) -> SurfaceAreaMeasure:
        raise NotImplementedError

    def vrad(self) -> float:
        return (self.volume() / ball_volume(self.dim)) ** (1.0 / self.dim)


class _PolytopeBase(ConvexBody):
    @property
    def facets(self) -> Facets:
        raise NotImplementedError

    def radial(self, u):
        uu = _unit(u, self.dim)
        fc = self.facets
        vals = 1.0 / np.max((uu @ fc.normals.T) / fc.offsets, axis=1)
        return _squeeze(_check_positive(vals, "radial function"), u)

    def volume(self) -> float:
        fc = self.facets
        return float(np.sum(fc.offsets * fc.areas) / self.dim)

    def centroid(self) -> np.ndarray:
        fc = self.facets
        vols = fan_volumes(fc.vertices, fc.simplices)
        centers = fc.vertices[fc.simplices].sum(axis=1) / (self.dim + 1)
        return (vols[:, None] * centers).sum(axis=0) / vols.sum()

    def surface_area_measure(self, grid: Optional[SphereGrid] = None) -> Atomic:
        fc = self.facets
        keep = fc.areas >= DEGENERATE_FACET * fc.areas.sum()
        return Atomic(fc.normals[keep], fc.areas[keep])


@dataclass(frozen=True, eq=False)
class VPolytope(_PolytopeBase):
    """Convex hull of finitely many points; only extreme points are kept."""

    vertices: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.vertices, dtype=float)
        if pts.ndim != 2:
            raise DimensionMismatch("vertices must be a 2-d array")
        n = pts.shape[1]
        if n > 3:
            raise UnsupportedDimension("polytope operations are implemented for n <= 3")
        if len(pts) < n + 1 or np.linalg.matrix_rank(pts[1:] - pts[0]) < n:
            raise DegenerateSample("need n+1 affinely independent vertices")
        fc = polytope_facets(pts)
        if np.any(fc.offsets <= 0):
            raise OriginNotInterior("origin is not interior to the polytope")
        object.__setattr__(self, "vertices", fc.vertices)
        object.__setattr__(self, "_facets", fc)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def facets(self) -> Facets:
        return self._facets

    def support(self, u):
        uu = _unit(u, self.dim)
        vals = np.max(uu @ self.vertices.T, axis=1)
        return _squeeze(_check_positive(vals, "support function"), u)

    def polar(self) -> "HPolytope":
        r = np.linalg.norm(self.vertices, axis=1)
        return HPolytope(self.vertices / r[:, None], 1.0 / r)

    def translate(self, z) -> "VPolytope":
        return VPolytope(self.vertices + np.asarray(z, dtype=float))

    def apply_sl(self, T) -> "VPolytope":
        t = _as_matrix(T)
        return VPolytope(self.vertices @ t.T)


@dataclass(frozen=True, eq=False)
class HPolytope(_PolytopeBase):
    """Intersection of half-spaces ``<normals_i, x> <= offsets_i``."""

    normals: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.normals, dtype=float)
        b = np.asarray(self.offsets, dtype=float)
        if a.ndim != 2 or b.shape != (a.shape[0],):
            raise DimensionMismatch("normals (k, n) and offsets (k,) required")
        if np.any(b <= 0):
            raise OriginNotInterior("offsets must be positive")
        norms = np.linalg.norm(a, axis=1)
        object.__setattr__(self, "normals", a / norms[:, None])
        object.__setattr__(self, "offsets", b / norms)

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    @cached_property
    def _dual_points(self) -> np.ndarray:
        return self.normals / self.offsets[:, None]

    @cached_property
    def _vertex_form(self) -> VPolytope:
        if self.dim > 3:
            raise UnsupportedDimension("H to V conversion is implemented for n <= 3")
        dual = VPolytope(self._dual_points)
        fc = dual.facets
        return VPolytope(fc.normals / fc.offsets[:, None])

    @property
    def facets(self) -> Facets:
        return self._vertex_form.facets

    def to_vpolytope(self) -> VPolytope:
        return self._vertex_form

    def radial(self, u):
        uu = _unit(u, self.dim)
        vals = 1.0 / np.max((uu @ self.normals.T) / self.offsets, axis=1)
        return _squeeze(_check_positive(vals, "radial function"), u)

    def support(self, u):
        return self._vertex_form.support(u)

    def polar(self) -> VPolytope:
        if self.dim > 3:
            raise UnsupportedDimension("H to V conversion is implemented for n <= 3")
        return VPolytope(self._dual_points)

    def translate(self, z) -> "HPolytope":
        z = np.asarray(z, dtype=float)
        return HPolytope(self.normals, self.offsets + self.normals @ z)

    def apply_sl(self, T) -> "HPolytope":
        t = _as_matrix(T)
        a = self.normals @ np.linalg.inv(t)
        return HPolytope(a, self.offsets)


@dataclass(frozen=True, eq=False)
class Ball(ConvexBody):
    radius: float
    dim: int = 2

    def __post_init__(self):
        if not self.radius > 0:
            raise OriginNotInterior("ball radius must be positive")
        if self.dim < 2:
            raise DimensionMismatch("dimension must be at least 2")

    def support(self, u):
        uu = _unit(u, self.dim)
        return _squeeze(np.full(len(uu), float(self.radius)), u)

    radial = support

    def polar(self) -> "Ball":
        return Ball(1.0 / self.radius, self.dim)

    def volume(self) -> float:
        return ball_volume(self.dim) * self.radius**self.dim

    def centroid(self) -> np.ndarray:
        return np.zeros(self.dim)

    def translate(self, z):
        raise UnsupportedRepresentation("translate a sampled copy: sample(body, grid).translate(z)")

    def apply_sl(self, T) -> "Ellipsoid":
        return Ellipsoid(self.radius * _as_matrix(T))

    def surface_area_measure(self, grid: Optional[SphereGrid] = None) -> Density:
        grid = _default_grid(self.dim, grid)
        return Density(grid, np.full(grid.size, self.radius ** (self.dim - 1)))


@dataclass(frozen=True, eq=False)
class Ellipsoid(ConvexBody):
    """The body ``A B^n_2`` for an invertible matrix ``A``."""

    matrix: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.matrix, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch("ellipsoid matrix must be square")
        if abs(np.linalg.det(a)) < 1e-14:
            raise DegenerateSample("ellipsoid matrix is singular")
        object.__setattr__(self, "matrix", a)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def support(self, u):
        uu = _unit(u, self.dim)
        return _squeeze(np.linalg.norm(uu @ self.matrix, axis=1), u)

    def radial(self, u):
        uu = _unit(u, self.dim)
        inv = np.linalg.inv(self.matrix)
        return _squeeze(1.0 / np.linalg.norm(uu @ inv.T, axis=1), u)

    def polar(self) -> "Ellipsoid":
        return Ellipsoid(np.linalg.inv(self.matrix).T)

    def volume(self) -> float:
        return ball_volume(self.dim) * abs(np.linalg.det(self.matrix))

    def centroid(self) -> np.ndarray:
        return np.zeros(self.dim)

    def translate(self, z):
        raise UnsupportedRepresentation("translate a sampled copy: sample(body, grid).translate(z)")

    def apply_sl(self, T) -> "Ellipsoid":
        return Ellipsoid(_as_matrix(T) @ self.matrix)

    def curvature(self, u) -> np.ndarray:
        """Curvature function ``det(A)^2 / h(u)^(n+1)``."""
        h = np.atleast_1d(self.support(u))
        return np.linalg.det(self.matrix) ** 2 / h ** (self.dim + 1)

    def surface_area_measure(self, grid: Optional[SphereGrid] = None) -> Density:
        grid = _default_grid(self.dim, grid)
        return Density(grid, self.curvature(grid.nodes))


# ---------------------------------------------------------------------------
# planar trigonometric interpolation


class _Fourier:
    """Trigonometric interpolant of samples on the equispaced circle grid."""

    def __init__(self, values):
        values = np.asarray(values, dtype=float)
        self.m = len(values)
        self.coef = np.fft.rfft(values) / self.m
        self.k = np.arange(len(self.coef))

    def __call__(self, theta, deriv: int = 0) -> np.ndarray:
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        m = self.m
        nyq = m // 2
        k = self.k[1:nyq]
        c = self.coef[1:nyq]
        phase = np.exp(1j * np.outer(theta, k))
        factor = (1j * k) ** deriv
        out = 2.0 * np.real(phase @ (c * factor))
        if deriv == 0:
            out += np.real(self.coef[0])
        cn = np.real(self.coef[nyq])
        if deriv == 0:
            out += cn * np.cos(nyq * theta)
        elif deriv == 1:
            out -= cn * nyq * np.sin(nyq * theta)
        elif deriv == 2:
            out -= cn * nyq**2 * np.cos(nyq * theta)
        return out


def curvature_2d(h) -> np.ndarray:
    """Planar curvature function ``f = h + h''`` by spectral differentiation.

    ``h`` holds support values on the equispaced circle grid.

    Raises
    ------
    NotConvexProfile
        If any resulting value is not positive.
    """
    h = np.asarray(h, dtype=float)
    m = len(h)
    k = np.arange(m // 2 + 1)
    f = np.fft.irfft((1.0 - k.astype(float) ** 2) * np.fft.rfft(h), n=m)
    if np.any(f <= 0) or not np.all(np.isfinite(f)):
        raise NotConvexProfile(f"h + h'' has minimum {f.min():.3e} <= 0")
    return f


# ---------------------------------------------------------------------------
# sampled smooth bodies


@dataclass(frozen=True, eq=False)
class SmoothSampled(ConvexBody):
    """Body known through support values (and optionally curvature) on a grid."""

    grid: SphereGrid
    h: np.ndarray
    f: Optional[np.ndarray] = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        if h.shape != (self.grid.size,):
            raise DimensionMismatch("one support value per grid node required")
        if np.any(h <= 0) or not np.all(np.isfinite(h)):
            raise OriginNotInterior("support values must be positive")
        object.__setattr__(self, "h", h)
        if self.f is not None:
            f = np.asarray(self.f, dtype=float)
            if f.shape != h.shape:
                raise DimensionMismatch("one curvature value per grid node required")
            if np.any(f <= 0) or not np.all(np.isfinite(f)):
                raise NotConvexProfile("curvature values must be positive")
            w = self.grid.weights
            drift = np.linalg.norm((f * w) @ self.grid.nodes)
            if drift > 1e-4 * np.sum(f * w):
                raise NotConvexProfile(
                    f"curvature samples violate the closure condition (drift {drift:.2e})"
                )
            object.__setattr__(self, "f", f)

    @property
    def dim(self) -> int:
        return self.grid.dim

    @property
    def _spectral(self) -> bool:
        return self.grid.is_equispaced_circle

    def _fourier(self, name: str) -> _Fourier:
        key = "fourier_" + name
        if key not in self._cache:
            self._cache[key] = _Fourier(getattr(self, name))
        return self._cache[key]

    def support(self, u):
        uu = _unit(u, self.dim)
        if self._spectral:
            theta = np.arctan2(uu[:, 1], uu[:, 0])
            vals = self._fourier("h")(theta)
        else:
            vals = self.grid.interpolate(self.h, uu)
        return _squeeze(_check_positive(vals, "support function"), u)

    def curvature(self, u) -> np.ndarray:
        if self.f is None:
            raise MissingCurvature("body has no curvature samples")
        uu = _unit(u, self.dim)
        if self._spectral:
            return self._fourier("f")(np.arctan2(uu[:, 1], uu[:, 0]))
        return self.grid.interpolate(self.f, uu)

    def boundary_points(self, theta) -> np.ndarray:
        """Boundary point with outer normal at angle ``theta`` (planar, spectral)."""
        if not self._spectral:
            raise UnsupportedDimension("boundary parametrization needs an equispaced circle grid")
        fh = self._fourier("h")
        theta = np.atleast_1d(theta)
        h = fh(theta)
        dh = fh(theta, 1)
        c, s = np.cos(theta), np.sin(theta)
        return np.column_stack([h * c - dh * s, h * s + dh * c])

    def _radial_spectral(self, psi) -> np.ndarray:
        fh = self._fourier("h")
        nodes_theta = self.grid.angles
        x = self.boundary_points(nodes_theta)
        delta = np.angle(np.exp(1j * (np.arctan2(x[:, 1], x[:, 0]) - nodes_theta)))
        # theta + delta(theta) is increasing; invert by interpolation then Newton
        psi_nodes = nodes_theta + delta
        per = np.concatenate([psi_nodes - 2 * pi, psi_nodes, psi_nodes + 2 * pi])
        th_per = np.concatenate([nodes_theta - 2 * pi, nodes_theta, nodes_theta + 2 * pi])
        psi = np.mod(np.atleast_1d(psi), 2 * pi)
        theta = np.interp(psi, per, th_per)
        for _ in range(30):
            h = fh(theta)
            dh = fh(theta, 1)
            fcur = h + fh(theta, 2)
            c, s = np.cos(theta), np.sin(theta)
            xb = np.column_stack([h * c - dh * s, h * s + dh * c])
            r2 = np.sum(xb**2, axis=1)
            resid = np.angle(np.exp(1j * (np.arctan2(xb[:, 1], xb[:, 0]) - psi)))
            slope = fcur * h / r2
            if np.any(slope <= 0):
                raise NotConvexProfile("support samples do not describe a convex body")
            step = resid / slope
            theta = theta - step
            if np.max(np.abs(step)) < 1e-15:
                break
        xb = self.boundary_points(theta)
        return np.linalg.norm(xb, axis=1)

    def _radial_wulff(self, uu) -> np.ndarray:
        return 1.0 / np.max((uu @ self.grid.nodes.T) / self.h, axis=1)

    def radial(self, u):
        uu = _unit(u, self.dim)
        if self._spectral:
            try:
                vals = self._radial_spectral(np.arctan2(uu[:, 1], uu[:, 0]))
            except NotConvexProfile:
                vals = self._radial_wulff(uu)
        else:
            vals = self._radial_wulff(uu)
        return _squeeze(_check_positive(vals, "radial function"), u)

    def radial_at_nodes(self) -> np.ndarray:
        if "rho" not in self._cache:
            self._cache["rho"] = np.atleast_1d(self.radial(self.grid.nodes))
        return self._cache["rho"]

    def polar(self) -> "SmoothSampled":
        hp = 1.0 / self.radial_at_nodes()
        fp = None
        if self._spectral and self.f is not None:
            try:
                fp = curvature_2d(hp)
            except NotConvexProfile:
                fp = None
        return SmoothSampled(self.grid, hp, fp)

    def volume(self) -> float:
        w = self.grid.weights
        if self.f is not None:
            return float(np.sum(self.h * self.f * w) / self.dim)
        return float(np.sum(self.radial_at_nodes() ** self.dim * w) / self.dim)

    def centroid(self) -> np.ndarray:
        w = self.grid.weights
        n = self.dim
        if self._spectral and self.f is not None:
            x = self.boundary_points(self.grid.angles)
            moment = (x * (self.h * self.f * w)[:, None]).sum(axis=0) / (n + 1)
        else:
            rho = self.radial_at_nodes()
            moment = (self.grid.nodes * (rho ** (n + 1) * w)[:, None]).sum(axis=0) / (n + 1)
        return moment / self.volume()

    def translate(self, z) -> "SmoothSampled":
        z = np.asarray(z, dtype=float)
        return SmoothSampled(self.grid, self.h + self.grid.nodes @ z, self.f)

    def apply_sl(self, T) -> "SmoothSampled":
        t = _as_matrix(T)
        v = self.grid.nodes
        tv = v @ t
        scale = np.linalg.norm(tv, axis=1)
        u = tv / scale[:, None]
        h_new = scale * np.atleast_1d(self.support(u))
        f_new = None
        if self.f is not None:
            det2 = np.linalg.det(t) ** 2
            f_new = det2 * self.curvature(u) / scale ** (self.dim + 1)
        return SmoothSampled(self.grid, h_new, f_new)

    def surface_area_measure(self, grid: Optional[SphereGrid] = None) -> Density:
        if self.f is None:
            raise MissingCurvature("smooth body has no curvature samples")
        if grid is not None and not grid.same_as(self.grid):
            return sample(self, grid).surface_area_measure()
        return Density(self.grid, self.f)


@dataclass(frozen=True, eq=False)
class StarBody:
    """Star body about the origin given by radial values on a grid."""

    grid: SphereGrid
    rho: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=float)
        if rho.shape != (self.grid.size,):
            raise DimensionMismatch("one radial value per grid node required")
        if np.any(rho <= 0) or not np.all(np.isfinite(rho)):
            raise OriginNotInterior("radial values must be positive")
        object.__setattr__(self, "rho", rho)

    @property
    def dim(self) -> int:
        return self.grid.dim

    def radial(self, u):
        uu = _unit(u, self.dim)
        return _squeeze(self.grid.interpolate(self.rho, uu), u)

    def radial_at_nodes(self) -> np.ndarray:
        return self.rho

    def volume(self) -> float:
        return float(np.sum(self.rho**self.dim * self.grid.weights) / self.dim)

    def vrad(self) -> float:
        return (self.volume() / ball_volume(self.dim)) ** (1.0 / self.dim)

    def centroid(self) -> np.ndarray:
        n = self.dim
        w = self.grid.weights
        moment = (self.grid.nodes * (self.rho ** (n + 1) * w)[:, None]).sum(axis=0) / (n + 1)
        return moment / self.volume()

    def scaled(self, c: float) -> "StarBody":
        return StarBody(self.grid, self.rho * c)


AnyBody = Union[ConvexBody, StarBody]


# ---------------------------------------------------------------------------
# module-level operations


def _default_grid(dim: int, grid: Optional[SphereGrid]) -> SphereGrid:
    return grid if grid is not None else build_grid(dim, 1024)


def sample(body: ConvexBody, grid: SphereGrid) -> SmoothSampled:
    """Sample support (and curvature where known) of ``body`` on ``grid``."""
    if isinstance(body, SmoothSampled) and body.grid.same_as(grid):
        return body
    if body.dim != grid.dim:
        raise DimensionMismatch("body and grid dimensions differ")
    h = np.atleast_1d(body.support(grid.nodes))
    if isinstance(body, Ball):
        f = np.full(grid.size, body.radius ** (body.dim - 1))
    elif isinstance(body, Ellipsoid):
        f = body.curvature(grid.nodes)
    elif isinstance(body, SmoothSampled) and body.f is not None:
        f = np.atleast_1d(body.curvature(grid.nodes))
    else:
        f = None
    return SmoothSampled(grid, h, f)


def support(body: ConvexBody, u):
    return body.support(u)


def radial(body: AnyBody, u):
    return body.radial(u)


def polar(body: ConvexBody) -> ConvexBody:
    return body.polar()


def volume(body: AnyBody) -> float:
    return body.volume()


def vrad(body: AnyBody) -> float:
    """Volume radius ``(|K| / omega_n)^(1/n)``."""
    return body.vrad()


def centroid(body: AnyBody) -> np.ndarray:
    return body.centroid()


def translate(body: ConvexBody, z) -> ConvexBody:
    return body.translate(z)


def apply_sl(body: ConvexBody, T) -> ConvexBody:
    return body.apply_sl(T)


def surface_area_measure(body: ConvexBody, grid: Optional[SphereGrid] = None) -> SurfaceAreaMeasure:
    return body.surface_area_measure(grid)


def random_sl(dim: int, seed) -> SLTransform:
    """Random unimodular matrix with condition number at most 20."""
    if dim not in (2, 3):
        raise UnsupportedDimension("random_sl supports dim 2 and 3")
    rng = np.random.default_rng(seed)
    q1, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    q2, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    half = 0.5 * np.log(19.5)
    logs = rng.uniform(-half, half, size=dim)
    logs -= logs.mean()
    t = q1 @ np.diag(np.exp(logs)) @ q2
    t /= abs(np.linalg.det(t)) ** (1.0 / dim)
    return SLTransform(t)


def random_body(dim: int, seed, kind: str = "polytope", grid: Optional[SphereGrid] = None) -> ConvexBody:
    """Seeded random body with centroid at the origin.

    ``kind="polytope"`` returns the hull of ``3n`` to ``5n`` Gaussian points.
    ``kind="smooth"`` returns, in the plane, a rotated ellipse whose support
    function carries a trigonometric perturbation of modes 3 to 6 (curvature
    kept above a fifth of its mean); in space, a random ellipsoid sampled on the grid.
    """
    if dim not in (2, 3):
        raise UnsupportedDimension("random_body supports dim 2 and 3")
    rng = np.random.default_rng(seed)
    for _ in range(100):
        try:
            if kind == "polytope":
                return _random_polytope(dim, rng)
            if kind == "smooth":
                return _random_smooth(dim, rng, _default_grid(dim, grid))
            raise ValueError(f"unknown body class {kind!r}")
        except (DegenerateSample, NotConvexProfile, OriginNotInterior):
            continue
    raise DegenerateSample("could not draw a valid body in 100 attempts")


def _random_polytope(dim, rng) -> VPolytope:
    k = 3 * dim + int(rng.integers(0, 2 * dim + 1))
    scales = np.exp(rng.uniform(-0.3, 0.3, size=dim))
    pts = rng.standard_normal((k, dim)) * scales
    fc = polytope_facets(pts)
    vols = fan_volumes(fc.vertices - fc.vertices.mean(axis=0), fc.simplices)
    centers = (fc.vertices - fc.vertices.mean(axis=0))[fc.simplices].sum(axis=1) / (dim + 1)
    c = (vols[:, None] * centers).sum(axis=0) / vols.sum() + fc.vertices.mean(axis=0)
    return VPolytope(fc.vertices - c)


def _random_smooth(dim, rng, grid) -> SmoothSampled:
    a = np.exp(rng.uniform(-0.4, 0.4, size=dim))
    a /= np.prod(a) ** (1.0 / dim)
    q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    ell = Ellipsoid(q @ np.diag(a))
    if dim == 3:
        body = sample(ell, grid)
        return body
    if not grid.is_equispaced_circle:
        raise UnsupportedDimension("planar smooth bodies need an equispaced circle grid")
    theta = grid.angles
    h = np.atleast_1d(ell.support(grid.nodes))
    amp = rng.uniform(0.05, 0.15)
    for k in range(3, 7):
        h = h + amp * (rng.standard_normal() * np.cos(k * theta) + rng.standard_normal() * np.sin(k * theta)) / k**2
    f = curvature_2d(h)
    if f.min() < 0.2 * f.mean():
        raise NotConvexProfile("perturbation too strong")
    body = SmoothSampled(grid, h, f)
    c = body.centroid()
    return body.translate(-c)


def normalize_volume(body: SmoothSampled, target: float) -> SmoothSampled:
    """Dilate a sampled body about the origin to the given volume."""
    s = (target / body.volume()) ** (1.0 / body.dim)
    f = None if body.f is None else body.f * s ** (body.dim - 1)
    return SmoothSampled(body.grid, body.h * s, f)
