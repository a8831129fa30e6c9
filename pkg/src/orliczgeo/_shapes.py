"""Log-parametrized shapes used as optimization variables.

Both shapes expose ``scale(x)``: the factor ``a_j`` such that the kernel
argument at direction ``u_j`` is ``a_j / h_K(u_j)`` after the volume
normalization built into the functionals.

* :class:`StarShape` -- star body with ``rho_j = exp(x_j)``; ``a = vrad(L) / rho``.
* :class:`PolarHullShape` -- H-polytope ``Q = {<u_j, y> <= exp(x_j)}``;
  ``a = vrad(Q polar) h_Q(u_j)`` with the exact volume of
  ``Q polar = conv{u_j exp(-x_j)}``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from ._hull import star_hull_mask
from .errors import DegenerateSample, UnsupportedDimension
from .spheregrid import ball_volume

# widest log-range of offsets kept by the projection; beyond it the hull
# computation loses all precision (the functionals flag such witnesses)
SPREAD_CAP = 24.0


class StarShape:
    def __init__(self, weights: np.ndarray, dim: int):
        self.w = np.asarray(weights, dtype=float)
        self.n = dim
        self.total = dim * ball_volume(dim)

    def project(self, x: np.ndarray) -> np.ndarray:
        return x - np.log(self._vrad(x))

    def _vrad(self, x):
        return (np.sum(np.exp(self.n * x) * self.w) / self.total) ** (1.0 / self.n)

    def scale(self, x: np.ndarray):
        """Return ``a`` and a closure mapping ``dJ/dlog(a)`` to ``dJ/dx`` for the
        minimized objective ``J``."""
        yw = np.exp(self.n * x) * self.w
        vr = (np.sum(yw) / self.total) ** (1.0 / self.n)
        pi = yw / np.sum(yw)
        a = vr * np.exp(-x)

        def pullback(g):
            return pi * np.sum(g) - g

        return a, pullback

    def radial(self, x: np.ndarray) -> np.ndarray:
        return np.exp(self.project(x))


class PolarHullShape:
    def __init__(self, directions: np.ndarray):
        self.dirs = np.asarray(directions, dtype=float)
        self.n = self.dirs.shape[1]
        if self.n not in (2, 3):
            raise UnsupportedDimension("geominimal optimization supports n = 2, 3")
        self.omega = ball_volume(self.n)
        if self.n == 2:
            self.order = np.argsort(np.arctan2(self.dirs[:, 1], self.dirs[:, 0]), kind="stable")
        self._cache_key = None
        self._cache_val = None

    # hull of the points u_j / t_j -------------------------------------------
    def hull(self, x: np.ndarray):
        """Tightened log-offsets, polar volume, vertex fan volumes, vertex mask,
        carrying face and its derivative weights."""
        key = x.tobytes()
        if key == self._cache_key:
            return self._cache_val
        t = np.exp(x)
        pts = self.dirs / t[:, None]
        if self.n == 2:
            xt, vol, fan, active, nbr, w = self._hull2(pts, x)
        else:
            xt, vol, fan, active, nbr, w = self._hull3(pts, x)
        # pushing a slack point outward grows the volume like the cone over
        # its carrying face, which is the one-sided analogue of a vertex fan
        slack = ~active
        fan = fan.copy()
        fan[slack] = np.abs(np.linalg.det(pts[nbr[slack]])) / math.factorial(self.n)
        out = (xt, vol, fan, active, nbr, w)
        self._cache_key, self._cache_val = key, out
        return out

    def _hull2(self, pts, x):
        order = self.order
        sp = pts[order]
        try:
            mask = star_hull_mask(sp, max_passes=4)
        except DegenerateSample:
            mask = None
        if mask is None:
            try:
                hull = ConvexHull(sp)
            except QhullError as exc:
                raise DegenerateSample(f"qhull failed: {exc}") from exc
            mask = np.zeros(len(sp), dtype=bool)
            mask[hull.vertices] = True
        vidx = np.flatnonzero(mask)
        V = sp[vidx]
        Vn = np.roll(V, -1, axis=0)
        tri = 0.5 * (V[:, 0] * Vn[:, 1] - V[:, 1] * Vn[:, 0])
        vol = float(np.sum(tri))
        fan_sorted = np.zeros(len(sp))
        fan_sorted[vidx] = tri + np.roll(tri, 1)
        # tighten non-vertices onto the edge between the enclosing vertices
        k = np.cumsum(mask) - 1
        k[k < 0] = len(vidx) - 1
        a = V[k]
        b = V[(k + 1) % len(vidx)]
        u = self.dirs[order]
        e = b - a
        num = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
        den = u[:, 0] * e[:, 1] - u[:, 1] * e[:, 0]
        xs = x[order].copy()
        inner = ~mask
        xs[inner] = np.minimum(np.log(den[inner] / num[inner]), xs[inner])
        xt = np.empty_like(x)
        xt[order] = xs
        fan = np.empty_like(x)
        fan[order] = fan_sorted
        active = np.empty_like(mask)
        active[order] = mask
        ends = order[np.column_stack([vidx[k], vidx[(k + 1) % len(vidx)]])]
        nbr = np.empty_like(ends)
        nbr[order] = ends
        return xt, vol, fan, active, nbr, self._weights(x, xt, active, nbr)

    def _weights(self, x, xt, active, nbr):
        """``d log h_Q(u_j) / d x_i`` for slack directions ``j`` and the
        vertices ``i`` of the polar face that carries them."""
        w = np.zeros(nbr.shape)
        j = np.flatnonzero(~active)
        if len(j):
            U = self.dirs[nbr[j]]  # (k, n, n), rows are face directions
            beta = np.linalg.solve(np.transpose(U, (0, 2, 1)), self.dirs[j][:, :, None])[:, :, 0]
            w[j] = beta * np.exp(x[nbr[j]] - xt[j][:, None])
        return w

    def _hull3(self, pts, x):
        try:
            hull = ConvexHull(pts)
        except QhullError as exc:
            raise DegenerateSample(f"qhull failed: {exc}") from exc
        simp = hull.simplices
        vols = np.abs(np.linalg.det(pts[simp])) / 6.0
        vol = float(np.sum(vols))
        fan = np.bincount(simp.ravel(), weights=np.repeat(vols, 3), minlength=len(pts))
        eq = hull.equations
        ratio = (self.dirs @ eq[:, :3].T) / (-eq[:, 3])
        face = np.argmax(ratio, axis=1)
        xt = np.log(ratio[np.arange(len(pts)), face])
        is_vertex = np.zeros(len(pts), dtype=bool)
        is_vertex[hull.vertices] = True
        xt[is_vertex] = x[is_vertex]
        xt = np.minimum(xt, x)
        nbr = simp[face]
        return xt, vol, fan, is_vertex, nbr, self._weights(x, xt, is_vertex, nbr)

    # optimizer interface ---------------------------------------------------
    def project(self, x: np.ndarray) -> np.ndarray:
        x = np.maximum(x, np.max(x) - SPREAD_CAP)
        xt, vol, fan, active, nbr, w = self.hull(x)
        c = np.log((vol / self.omega) ** (1.0 / self.n))
        out = xt + c
        # the projected point has the same hull, rescaled
        shrink = np.exp(-self.n * c)
        self._cache_key = out.tobytes()
        self._cache_val = (out, vol * shrink, fan * shrink, active, nbr, w)
        return out

    def scale(self, x: np.ndarray):
        xt, vol, fan, active, nbr, w = self.hull(x)
        vr = (vol / self.omega) ** (1.0 / self.n)
        a = vr * np.exp(xt)
        q = -fan / (self.n * vol)
        slack = ~active

        def pullback(g):
            total = np.sum(g)
            out = np.where(active, total * q + g, 0.0)
            # a slack facet's support value moves with the face that carries it
            np.add.at(out, nbr[slack].ravel(), (w[slack] * g[slack, None]).ravel())
            # lowering its offset activates it; raising it changes nothing
            out[slack] = np.maximum(total * q[slack] + g[slack], 0.0)
            return out

        return a, pullback

    def offsets(self, x: np.ndarray) -> np.ndarray:
        return np.exp(self.project(x))

    def polar_volume(self, x: np.ndarray) -> float:
        return self.hull(x)[1]
