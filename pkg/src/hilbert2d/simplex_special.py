"""The triangle exception.

The open triangle with its Hilbert metric is isometric to the plane with the
hexagonal norm ``max(u, w, 0) - min(u, w, 0)`` through

    Phi(t1, t2, t3) = (ln(t1 / t3), ln(t2 / t3)),

``t`` being barycentric coordinates. In these (u, w) coordinates the unit
ball is the affine hexagon with vertices (+-1, 0), (0, +-1), +-(1, 1).
The point reflection ``v -> -v`` pulls back to the reciprocal map
``(t1 : t2 : t3) -> (1/t1 : 1/t2 : 1/t3)``, an isometry that is not projective.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .convex_domain import Polygon, ShapeClass
from .errors import BoundaryPoint, InvalidDomain
from .hilbert_metric import distance

BARY_EPS = 1e-15


@dataclass(frozen=True)
class BarycentricPoint:
    t1: float
    t2: float
    t3: float

    def __post_init__(self):
        t = self.as_array()
        if not np.all(np.isfinite(t)) or abs(t.sum() - 1.0) > 1e-12:
            raise ValueError("barycentric coordinates must sum to 1")
        if np.any(t <= BARY_EPS):
            raise BoundaryPoint("barycentric point is not interior")

    @classmethod
    def from_weights(cls, w):
        w = np.asarray(w, dtype=np.float64).reshape(3)
        if np.any(w <= 0):
            raise BoundaryPoint("barycentric weights must be positive")
        w = w / w.sum()
        return cls(*(float(a) for a in w))

    def as_array(self):
        return np.array([self.t1, self.t2, self.t3], dtype=np.float64)


class HexVector(NamedTuple):
    u: float
    w: float


def _as_bary(p):
    if isinstance(p, BarycentricPoint):
        return p.as_array()
    return BarycentricPoint(*np.asarray(p, dtype=np.float64).reshape(3)).as_array()


def to_hex(p):
    t = _as_bary(p)
    return HexVector(float(np.log(t[0] / t[2])), float(np.log(t[1] / t[2])))


def from_hex(v):
    u, w = v
    return BarycentricPoint.from_weights([np.exp(u), np.exp(w), 1.0])


def hex_norm(v):
    u, w = float(v[0]), float(v[1])
    return max(u, w, 0.0) - min(u, w, 0.0)


def hex_norm_array(V):
    V = np.asarray(V, dtype=np.float64).reshape(-1, 2)
    Z = np.column_stack([V, np.zeros(len(V))])
    return Z.max(axis=1) - Z.min(axis=1)


# --- barycentric <-> cartesian for an arbitrary triangle -------------------

def triangle_vertices(triangle):
    if not isinstance(triangle, Polygon) or triangle.classify_shape() is not ShapeClass.TRIANGLE:
        raise InvalidDomain("expected a triangle")
    return triangle.extreme_points()


def barycentric(triangle, P):
    """(n, 3) barycentric coordinates from signed areas."""
    A, B, C = triangle_vertices(triangle)
    P = np.asarray(P, dtype=np.float64).reshape(-1, 2)

    def area(p, q, r):
        return (q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1]) - (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0])

    total = area(A, B, C)
    return np.column_stack([area(P, B, C), area(A, P, C), area(A, B, P)]) / total


def cartesian(triangle, T):
    V = triangle_vertices(triangle)
    T = np.asarray(T, dtype=np.float64).reshape(-1, 3)
    return T @ V


def hex_coords(triangle, P):
    """Phi in cartesian input: (n, 2) array of (u, w)."""
    T = barycentric(triangle, P)
    if np.any(T <= BARY_EPS):
        raise BoundaryPoint("point is not interior to the triangle")
    L = np.log(T)
    return L[:, :2] - L[:, 2:3]


def from_hex_coords(triangle, V):
    V = np.asarray(V, dtype=np.float64).reshape(-1, 2)
    W = np.column_stack([np.exp(V), np.ones(len(V))])
    return cartesian(triangle, W / W.sum(axis=1, keepdims=True))


def isometry_defect_triangle(x, y, triangle):
    """|Hilbert distance - hex norm of Phi x - Phi y| for barycentric x, y."""
    tx, ty = _as_bary(x), _as_bary(y)
    px, py = cartesian(triangle, np.array([tx, ty]))
    d = distance(triangle, px, py)
    hx, hy = to_hex(tx), to_hex(ty)
    return abs(d - hex_norm((hx.u - hy.u, hx.w - hy.w)))


def reciprocal_map(p):
    t = _as_bary(p)
    return BarycentricPoint.from_weights(1.0 / t)


# --- the dihedral group of the hexagon --------------------------------------

_ROT60 = np.array([[1, -1], [1, 0]])
_SWAP = np.array([[0, 1], [1, 0]])


def hex_symmetries():
    """The 12 linear maps preserving the hexagonal norm: R^k and R^k S.

    Even powers of R and their products with S permute the barycentric
    coordinates (projective); the others involve the point reflection.
    """
    out = []
    R = np.eye(2, dtype=int)
    for _ in range(6):
        out.append(R.copy())
        R = _ROT60 @ R
    out += [M @ _SWAP for M in out[:6]]
    return out


def hex_symmetry_map(triangle, M):
    """Triangle self-map conjugate under Phi to the linear map M."""
    M = np.asarray(M, dtype=np.float64)

    def f(P):
        V = hex_coords(triangle, P)
        return from_hex_coords(triangle, V @ M.T)

    return f


def reciprocal_triangle_map(triangle):
    """Cartesian version of :func:`reciprocal_map` on ``triangle``."""

    def f(P):
        T = barycentric(triangle, P)
        if np.any(T <= BARY_EPS):
            raise BoundaryPoint("point is not interior to the triangle")
        R = 1.0 / T
        return cartesian(triangle, R / R.sum(axis=1, keepdims=True))

    return f
