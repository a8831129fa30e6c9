"""Pure-Python facet-sum oracle for planar polygon kernels.

Deliberately shares no code with the library: plain floats, CCW vertex
lists, one loop over edges.
"""

import math

from orliczgeo import OrliczFunction

P = OrliczFunction.power


def _polygon_facets(ccw_vertices):
    """Outer unit normals and edge lengths of a polygon given in CCW order."""
    out = []
    m = len(ccw_vertices)
    for k in range(m):
        (x0, y0), (x1, y1) = ccw_vertices[k], ccw_vertices[(k + 1) % m]
        dx, dy = x1 - x0, y1 - y0
        length = math.hypot(dx, dy)
        out.append(((dy / length, -dx / length), length, (x0, y0)))
    return out


def _h(vertices, u):
    return max(x * u[0] + y * u[1] for x, y in vertices)


def oracle_v_phi(K_ccw, Q_vertices, phi):
    total = 0.0
    for u, area, p in _polygon_facets(K_ccw):
        hk = p[0] * u[0] + p[1] * u[1]
        total += phi(_h(Q_vertices, u) / hk) * hk * area
    return total / 2.0


def _regular(k, r=1.0, phase=0.0, shift=(0.0, 0.0)):
    return [(shift[0] + r * math.cos(phase + 2 * math.pi * j / k),
             shift[1] + r * math.sin(phase + 2 * math.pi * j / k)) for j in range(k)]


POLYGONS = [
    _regular(3, 1.0, 0.1, (0.05, -0.1)),
    _regular(5, 1.3, 0.4),
    [(2.0, -1.0), (1.5, 1.0), (-1.0, 1.2), (-1.2, -0.8)],
    _regular(8, 0.7, 0.0, (0.1, 0.1)),
]
SCALAR_PHIS = [
    (P(2), lambda t: t**2),
    (P(-1), lambda t: 1 / t),
    (P(0.5), math.sqrt),
    (OrliczFunction.arctan_inv_n(), lambda t: math.atan(t**-2)),
    (OrliczFunction.log1p_inv_n(), lambda t: math.log1p(t**-2)),
]
