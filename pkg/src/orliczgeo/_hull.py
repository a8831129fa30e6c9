"""Convex hull helpers for planar and spatial point sets.

The planar routines are implemented here; three-dimensional hulls come from
qhull via :class:`scipy.spatial.ConvexHull`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import DegenerateSample, UnsupportedDimension


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def monotone_chain(points) -> np.ndarray:
    """Indices of the planar convex hull vertices in counter-clockwise order.

    Collinear boundary points are discarded.
    """
    pts = np.asarray(points, dtype=float)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    if len(order) < 3:
        raise DegenerateSample("need at least three points for a planar hull")
    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and _cross(pts[lower[-2]], pts[lower[-1]], pts[i]) <= 0:
            lower.pop()
        lower.append(int(i))
    upper: list[int] = []
    for i in order[::-1]:
        while len(upper) >= 2 and _cross(pts[upper[-2]], pts[upper[-1]], pts[i]) <= 0:
            upper.pop()
        upper.append(int(i))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateSample("points are collinear")
    return np.array(hull, dtype=int)


def star_hull_mask(points, max_passes: int | None = None) -> np.ndarray | None:
    """Extreme-point mask for a polygon that is star-shaped about the origin.

    ``points`` must be ordered by polar angle with the origin strictly inside
    their convex hull.  Reflex and flat vertices of the star polygon are never
    extreme, so they are removed in vectorized passes until none remain.
    Returns ``None`` when ``max_passes`` passes were not enough.
    """
    pts = np.asarray(points, dtype=float)
    keep = np.arange(len(pts))
    passes = 0
    while True:
        if max_passes is not None and passes >= max_passes:
            return None
        passes += 1
        p = pts[keep]
        prev = np.roll(p, 1, axis=0)
        nxt = np.roll(p, -1, axis=0)
        turn = (p[:, 0] - prev[:, 0]) * (nxt[:, 1] - p[:, 1]) - (
            p[:, 1] - prev[:, 1]
        ) * (nxt[:, 0] - p[:, 0])
        scale = np.abs(prev[:, 0] * nxt[:, 1] - prev[:, 1] * nxt[:, 0]) + 1e-300
        bad = turn <= 1e-14 * scale
        if not bad.any():
            break
        # never drop two neighbours in one pass: keeps the polygon star-shaped
        drop = bad & ~np.roll(bad, 1)
        if not drop.any():
            drop = bad.copy()
            drop[1:] = False
        keep = keep[~drop]
        if len(keep) < 3:
            raise DegenerateSample("star polygon collapsed")
    mask = np.zeros(len(pts), dtype=bool)
    mask[keep] = True
    return mask


@dataclass(frozen=True)
class Facets:
    """Facet data of a polytope ``{x : <normals_f, x> <= offsets_f}``.

    ``simplices`` triangulate the boundary (edges in 2D, triangles in 3D) and
    ``simplex_facet`` maps each boundary simplex to its merged facet.
    """

    vertices: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    areas: np.ndarray
    simplices: np.ndarray
    simplex_facet: np.ndarray


def polytope_facets(points) -> Facets:
    """Hull of ``points`` with outward unit facet normals, offsets and areas.

    Offsets are measured from the origin and may be non-positive when the
    origin is not interior; callers decide whether that is an error.
    """
    pts = np.asarray(points, dtype=float)
    dim = pts.shape[1]
    if dim == 2:
        idx = monotone_chain(pts)
        verts = pts[idx]
        k = len(verts)
        a = verts
        b = np.roll(verts, -1, axis=0)
        edge = b - a
        lengths = np.linalg.norm(edge, axis=1)
        normals = np.column_stack([edge[:, 1], -edge[:, 0]]) / lengths[:, None]
        offsets = np.einsum("ij,ij->i", normals, a)
        simplices = np.column_stack([np.arange(k), (np.arange(k) + 1) % k])
        return Facets(verts, normals, offsets, lengths, simplices, np.arange(k))
    if dim == 3:
        try:
            hull = ConvexHull(pts)
        except QhullError as exc:
            raise DegenerateSample(f"qhull failed: {exc}") from exc
        used = np.unique(hull.simplices)
        remap = -np.ones(len(pts), dtype=int)
        remap[used] = np.arange(len(used))
        verts = pts[used]
        simplices = remap[hull.simplices]
        eq = hull.equations
        tri_normals = eq[:, :3]
        tri_offsets = -eq[:, 3]
        tri = verts[simplices]
        tri_areas = 0.5 * np.linalg.norm(
            np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0]), axis=1
        )
        # orient every boundary triangle outward
        nrm = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
        flip = np.einsum("ij,ij->i", nrm, tri_normals) < 0
        simplices[flip] = simplices[flip][:, [0, 2, 1]]
        key = np.round(np.column_stack([tri_normals, tri_offsets]) * 1e9).astype(np.int64)
        _, facet_id, inverse = np.unique(key, axis=0, return_index=True, return_inverse=True)
        inverse = inverse.ravel()
        nf = len(facet_id)
        areas = np.bincount(inverse, weights=tri_areas, minlength=nf)
        normals = tri_normals[facet_id]
        offsets = tri_offsets[facet_id]
        return Facets(verts, normals, offsets, areas, simplices, inverse)
    raise UnsupportedDimension(f"polytope hulls are implemented for n <= 3, got n={dim}")


def fan_volumes(vertices, simplices) -> np.ndarray:
    """Signed volumes of the cones from the origin over boundary simplices."""
    v = np.asarray(vertices)[simplices]
    dim = v.shape[-1]
    if dim == 2:
        return 0.5 * (v[:, 0, 0] * v[:, 1, 1] - v[:, 0, 1] * v[:, 1, 0])
    return np.linalg.det(v) / 6.0
