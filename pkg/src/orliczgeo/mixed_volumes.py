"""Integral kernels over the surface area measure of a body.

All kernels are finite sums over the atoms (polytopes) or grid nodes (smooth
bodies) of ``dS(K, .)``; numpy's pairwise summation fixes the order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .bodies import Atomic, Ball, ConvexBody, Density, SmoothSampled, StarBody
from .errors import (
    DimensionMismatch,
    IncompatibleGrids,
    MissingCurvature,
    RangeError,
    UnsupportedDimension,
)
from .orlicz import OrliczFunction
from .spheregrid import SphereGrid, build_grid

DEFAULT_RESOLUTION = 1024


@dataclass(frozen=True)
class MixedVolumeResult:
    value: float
    integrand_min: float
    integrand_max: float
    provenance: str

    def __float__(self) -> float:
        return self.value

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "integrand_min": self.integrand_min,
            "integrand_max": self.integrand_max,
            "provenance": self.provenance,
        }


@dataclass(frozen=True, eq=False)
class KernelData:
    """Directions, ``h_K`` and ``dS(K, .)`` weights for one body."""

    dirs: np.ndarray
    h: np.ndarray
    dS: np.ndarray
    measure: object
    volume: float

    @property
    def dim(self) -> int:
        return self.dirs.shape[1]

    @property
    def atomic(self) -> bool:
        return isinstance(self.measure, Atomic)

    @property
    def grid(self) -> Optional[SphereGrid]:
        return None if self.atomic else self.measure.grid

    @property
    def provenance(self) -> str:
        return self.measure.provenance


def _grid_for(K: ConvexBody, grid: Optional[SphereGrid]) -> Optional[SphereGrid]:
    if grid is not None:
        return grid
    if isinstance(K, SmoothSampled):
        return K.grid
    return build_grid(K.dim, DEFAULT_RESOLUTION)


def kernel_data(K: ConvexBody, grid: Optional[SphereGrid] = None) -> KernelData:
    measure = K.surface_area_measure(_grid_for(K, grid))
    dirs = measure.directions
    if isinstance(measure, Atomic):
        h = np.atleast_1d(K.support(dirs))
    elif isinstance(K, SmoothSampled) and K.grid.same_as(measure.grid):
        h = K.h
    else:
        h = np.atleast_1d(K.support(dirs))
    dS = measure.weights
    vol = float(np.sum(h * dS) / K.dim)
    return KernelData(dirs, h, dS, measure, vol)


def support_at(body, dirs: np.ndarray, grid: Optional[SphereGrid] = None) -> np.ndarray:
    if isinstance(body, Ball):
        return np.full(len(dirs), float(body.radius))
    if isinstance(body, SmoothSampled) and grid is not None and body.grid.same_as(grid):
        return body.h
    return np.atleast_1d(body.support(dirs))


def radial_at(body, dirs: np.ndarray, grid: Optional[SphereGrid] = None) -> np.ndarray:
    if isinstance(body, Ball):
        return np.full(len(dirs), float(body.radius))
    if isinstance(body, StarBody) and grid is not None and body.grid.same_as(grid):
        return body.rho
    return np.atleast_1d(body.radial(dirs))


def _check_dims(*bodies):
    dims = {b.dim for b in bodies}
    if len(dims) != 1:
        raise DimensionMismatch(f"bodies live in different dimensions {sorted(dims)}")


def _finish(terms: np.ndarray, dim: int, provenance: str) -> MixedVolumeResult:
    if not np.all(np.isfinite(terms)):
        raise RangeError("kernel integrand is not finite")
    value = float(np.sum(terms) / dim)
    if not (value > 0 and np.isfinite(value)):
        raise RangeError(f"kernel value {value!r} is not finite and positive")
    return MixedVolumeResult(value, float(terms.min()), float(terms.max()), provenance)


def _phi_values(phi: OrliczFunction, arg: np.ndarray, dim: int) -> np.ndarray:
    phi = phi.with_dim(dim)
    vals = phi.raw(arg)
    if np.any(~np.isfinite(vals)) or np.any(vals <= 0):
        raise RangeError(f"{phi.label} is not finite and positive on the kernel arguments")
    return vals


def v_phi(K: ConvexBody, Q: ConvexBody, phi: OrliczFunction,
          grid: Optional[SphereGrid] = None) -> MixedVolumeResult:
    """``(1/n) sum phi(h_Q / h_K) h_K dS(K, .)``."""
    _check_dims(K, Q)
    kd = kernel_data(K, grid)
    hq = support_at(Q, kd.dirs, kd.grid)
    terms = _phi_values(phi, hq / kd.h, K.dim) * kd.h * kd.dS
    return _finish(terms, K.dim, kd.provenance)


def v_phi_polar(K: ConvexBody, L, phi: OrliczFunction,
                grid: Optional[SphereGrid] = None) -> MixedVolumeResult:
    """``V_phi(K, L polar)`` through ``phi(1 / (rho_L h_K))``."""
    _check_dims(K, L)
    kd = kernel_data(K, grid)
    rho = radial_at(L, kd.dirs, kd.grid)
    terms = _phi_values(phi, 1.0 / (rho * kd.h), K.dim) * kd.h * kd.dS
    return _finish(terms, K.dim, kd.provenance)


def v_p(K: ConvexBody, L, p: float, polar: bool = False,
        grid: Optional[SphereGrid] = None) -> float:
    """L_p mixed volume ``(1/n) sum h_L^p h_K^(1-p) dS(K, .)``.

    With ``polar=True`` the factor ``h_L^p`` is replaced by ``rho_L^(-p)``,
    i.e. the second body is the polar of ``L``.
    """
    _check_dims(K, L)
    kd = kernel_data(K, grid)
    if polar:
        base = 1.0 / radial_at(L, kd.dirs, kd.grid)
    else:
        base = support_at(L, kd.dirs, kd.grid)
    terms = base**p * kd.h ** (1.0 - p) * kd.dS
    return _finish(terms, K.dim, kd.provenance).value


def s_phi(K: ConvexBody, phi: OrliczFunction, grid: Optional[SphereGrid] = None) -> float:
    """Orlicz surface area ``n V_phi(K, B)``."""
    return K.dim * v_phi(K, Ball(1.0, K.dim), phi, grid).value


# ---------------------------------------------------------------------------
# planar curvature-weighted kernels


def _density_data(K: ConvexBody, grid: Optional[SphereGrid]):
    """(grid, h, f) for a body with a curvature function on ``grid``."""
    if K.dim != 2:
        raise UnsupportedDimension("curvature-weighted kernels are planar only")
    g = _grid_for(K, grid)
    measure = K.surface_area_measure(g)
    if not isinstance(measure, Density):
        raise MissingCurvature("body has no curvature function (atomic surface area measure)")
    h = support_at(K, g.nodes, g)
    return measure.grid, h, measure.f


def _common_grid(bodies, grid: Optional[SphereGrid]) -> SphereGrid:
    if grid is not None:
        return grid
    grids = [b.grid for b in bodies if isinstance(b, SmoothSampled)]
    if not grids:
        return build_grid(2, DEFAULT_RESOLUTION)
    for g in grids[1:]:
        if not g.same_as(grids[0]):
            raise IncompatibleGrids("bodies are sampled on different grids")
    return grids[0]


def _factor(K, Q, phi, polar, grid):
    g, h, f = _density_data(K, grid)
    if polar:
        arg = 1.0 / (radial_at(Q, g.nodes, g) * h)
    else:
        arg = support_at(Q, g.nodes, g) / h
    return _phi_values(phi, arg, 2) * h * f


def v_phi_multi(Ks: Sequence[ConvexBody], Qs: Sequence, phis: Sequence[OrliczFunction],
                polar_flags: Optional[Sequence[bool]] = None,
                grid: Optional[SphereGrid] = None) -> MixedVolumeResult:
    """``(1/n) int prod_i [phi_i(.) h_{K_i} f_{K_i}]^(1/n) dsigma`` for ``n = 2``."""
    n = 2
    if not (len(Ks) == len(Qs) == len(phis) == n):
        raise DimensionMismatch("exactly n = 2 bodies, bodies Q and functions are required")
    _check_dims(*Ks, *Qs)
    if Ks[0].dim != 2:
        raise UnsupportedDimension("mixed kernels are implemented for n = 2")
    flags = list(polar_flags) if polar_flags is not None else [False] * n
    g = _common_grid(Ks, grid)
    logs = sum(np.log(_factor(K, Q, phi, fl, g)) for K, Q, phi, fl in zip(Ks, Qs, phis, flags))
    terms = np.exp(logs / n) * g.weights
    return _finish(terms, n, f"grid:2x{g.size}")


def v_phi_ith(K: ConvexBody, L: ConvexBody, Q1, Q2, phi1: OrliczFunction, phi2: OrliczFunction,
              i: float, polar_flags: Sequence[bool] = (False, False),
              grid: Optional[SphereGrid] = None) -> MixedVolumeResult:
    """``(1/n) int [phi1(.) h_K f_K]^((n-i)/n) [phi2(.) h_L f_L]^(i/n) dsigma`` for ``n = 2``."""
    n = 2
    _check_dims(K, L, Q1, Q2)
    if K.dim != 2:
        raise UnsupportedDimension("mixed kernels are implemented for n = 2")
    g = _common_grid([K, L], grid)
    a = np.log(_factor(K, Q1, phi1, polar_flags[0], g))
    b = np.log(_factor(L, Q2, phi2, polar_flags[1], g))
    terms = np.exp(((n - i) * a + i * b) / n) * g.weights
    return _finish(terms, n, f"grid:2x{g.size}")
