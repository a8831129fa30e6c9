"""Equal-weight, antipodally symmetric quadrature rules on the unit sphere.

All spherical integrals in the package are sums ``sum(values * weights)`` over
a :class:`SphereGrid`.  Grids are built so that every node ``u`` is paired
with ``-u``, which makes the first moment of the weights vanish exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gamma, pi

import numpy as np
from scipy.spatial import ConvexHull
from scipy.stats import norm, qmc

from .errors import DimensionMismatch, InvalidResolution, NonFiniteIntegrand

GOLDEN = (1.0 + 5.0**0.5) / 2.0


def ball_volume(dim: int) -> float:
    """Volume of the Euclidean unit ball in ``R^dim``."""
    return pi ** (dim / 2.0) / gamma(dim / 2.0 + 1.0)


def sphere_measure(dim: int) -> float:
    """Total (dim-1)-dimensional measure of ``S^{dim-1}``, i.e. ``dim * ball_volume(dim)``."""
    return dim * ball_volume(dim)


@dataclass(frozen=True, eq=False)
class SphereGrid:
    """Nodes and positive weights standing in for the spherical measure.

    Parameters
    ----------
    dim : int
        Ambient dimension ``n``; nodes live on ``S^{n-1}``.
    nodes : ndarray, shape (m, n)
        Unit vectors.
    weights : ndarray, shape (m,)
        Positive weights summing to the total measure of the sphere.
    """

    dim: int
    nodes: np.ndarray
    weights: np.ndarray
    _interp: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != self.dim:
            raise DimensionMismatch(f"nodes must have shape (m, {self.dim})")
        if weights.shape != (nodes.shape[0],):
            raise DimensionMismatch("one weight per node required")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return self.nodes.shape[0]

    def __len__(self) -> int:
        return self.size

    def same_as(self, other: "SphereGrid") -> bool:
        """True when both grids have identical nodes and weights."""
        if other is self:
            return True
        return (
            self.dim == other.dim
            and self.size == other.size
            and np.array_equal(self.nodes, other.nodes)
            and np.array_equal(self.weights, other.weights)
        )

    @cached_property
    def angles(self) -> np.ndarray:
        """Polar angles of the nodes (circle grids only)."""
        if self.dim != 2:
            raise DimensionMismatch("angles are only defined for circle grids")
        return np.mod(np.arctan2(self.nodes[:, 1], self.nodes[:, 0]), 2 * pi)

    @cached_property
    def is_equispaced_circle(self) -> bool:
        if self.dim != 2:
            return False
        m = self.size
        expected = 2 * pi * np.arange(m) / m
        return bool(np.allclose(self.angles, expected, atol=1e-12))

    def integrate(self, values) -> float:
        return integrate(self, values)

    def interpolate(self, values, u) -> np.ndarray:
        """Piecewise-linear interpolation of node values at directions ``u``.

        Circle grids interpolate linearly in the angle; higher-dimensional
        grids use barycentric coordinates on the spherical triangulation
        given by the convex hull of the nodes.
        """
        values = np.asarray(values, dtype=float)
        if values.shape != (self.size,):
            raise DimensionMismatch("one value per node required")
        u = np.atleast_2d(np.asarray(u, dtype=float))
        if u.shape[1] != self.dim:
            raise DimensionMismatch(f"directions must have {self.dim} components")
        if self.dim == 2:
            return self._interp_circle(values, u)
        return self._interp_simplicial(values, u)

    def _interp_circle(self, values, u):
        order = self._interp.get("order")
        if order is None:
            order = np.argsort(self.angles, kind="stable")
            self._interp["order"] = order
        ang = self.angles[order]
        vals = values[order]
        ang_ext = np.concatenate([ang, [ang[0] + 2 * pi]])
        vals_ext = np.concatenate([vals, [vals[0]]])
        theta = np.mod(np.arctan2(u[:, 1], u[:, 0]), 2 * pi)
        theta = np.where(theta < ang[0], theta + 2 * pi, theta)
        return np.interp(theta, ang_ext, vals_ext)

    def _interp_simplicial(self, values, u):
        tri = self._interp.get("tri")
        if tri is None:
            hull = ConvexHull(self.nodes)
            simplices = hull.simplices
            inv = np.linalg.inv(np.transpose(self.nodes[simplices], (0, 2, 1)))
            tri = (simplices, inv)
            self._interp["tri"] = tri
        simplices, inv = tri
        out = np.empty(u.shape[0])
        for i, x in enumerate(u):
            coords = inv @ x
            best = np.argmax(coords.min(axis=1))
            lam = np.clip(coords[best], 0.0, None)
            lam = lam / lam.sum()
            out[i] = lam @ values[simplices[best]]
        return out

    def to_dict(self) -> dict:
        return {
            "dim": int(self.dim),
            "nodes": self.nodes.tolist(),
            "weights": self.weights.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SphereGrid":
        return cls(int(data["dim"]), np.array(data["nodes"], dtype=float),
                   np.array(data["weights"], dtype=float))


def build_grid(dim: int, resolution: int) -> SphereGrid:
    """Build an equal-weight, antipodally paired grid with ``resolution`` nodes.

    * ``dim == 2``: equispaced angles ``2 pi k / m``.
    * ``dim == 3``: Fibonacci points on the upper hemisphere mirrored through
      the origin.  When ``m`` is a multiple of 8 the hemisphere set is also
      invariant under quarter turns about the z-axis and the z-levels are
      rescaled so that all degree-2 moments are exact.
    * ``dim >= 4``: Halton directions (Gaussian-mapped) mirrored through the
      origin.
    """
    dim = int(dim)
    m = int(resolution)
    if dim < 2:
        raise InvalidResolution("dimension must be at least 2")
    min_m = 4 if dim == 2 else 8
    if m < min_m or m % 2:
        raise InvalidResolution(
            f"resolution must be even and >= {min_m} for dim={dim}, got {m}"
        )
    if dim == 2:
        theta = 2 * pi * np.arange(m) / m
        nodes = np.column_stack([np.cos(theta), np.sin(theta)])
    elif dim == 3:
        nodes = _fibonacci_symmetric(m)
    else:
        nodes = _halton_symmetric(dim, m)
    weights = np.full(m, sphere_measure(dim) / m)
    return SphereGrid(dim, nodes, weights)


def _fibonacci_symmetric(m: int) -> np.ndarray:
    if m % 8 == 0:
        k = m // 8
        j = np.arange(k)
        z = 1.0 - (j + 0.5) / k
        # exact second moment: mean z^2 over the sphere is 1/3
        z = z * np.sqrt((1.0 / 3.0) / np.mean(z**2))
        theta = 2 * pi * j / GOLDEN
        zs = np.tile(z, 4)
        thetas = np.concatenate([theta + r * pi / 2 for r in range(4)])
    else:
        k = m // 2
        j = np.arange(k)
        zs = 1.0 - (j + 0.5) / k
        thetas = 2 * pi * j / GOLDEN
    s = np.sqrt(np.clip(1.0 - zs**2, 0.0, None))
    upper = np.column_stack([s * np.cos(thetas), s * np.sin(thetas), zs])
    upper /= np.linalg.norm(upper, axis=1, keepdims=True)
    return np.vstack([upper, -upper])


def _halton_symmetric(dim: int, m: int) -> np.ndarray:
    sampler = qmc.Halton(d=dim, scramble=False)
    pts = sampler.random(m // 2 + 1)[1:]
    g = norm.ppf(np.clip(pts, 1e-12, 1 - 1e-12))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return np.vstack([g, -g])


def integrate(grid: SphereGrid, values) -> float:
    """Return ``sum(values_i * weights_i)``."""
    values = np.asarray(values, dtype=float)
    if values.shape != (grid.size,):
        raise DimensionMismatch(
            f"expected {grid.size} integrand values, got shape {values.shape}"
        )
    if not np.all(np.isfinite(values)):
        raise NonFiniteIntegrand("integrand contains non-finite values")
    return float(np.sum(values * grid.weights))
