"""Bounded convex planar domains and the boundary constructions the Hilbert
metric needs: chords, extreme points, shape classes.

Three shape families are supported:

* :class:`Polygon` - counterclockwise convex vertex list,
* :class:`SuperEllipse` - ``c + R(rot) diag(a, b) {|u|^p + |v|^p < 1}``, p > 1,
* :class:`Ellipse` - the ``p = 2`` case, which is also closed under
  projective maps.

All tolerances are relative to the domain diameter.
"""
import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import _kernels
from .errors import CoincidentPoints, InvalidDomain, NotInterior
from .geom_core import ProjMap

BOUNDARY_TOL = 1e-10
COINCIDENT_EPS = 1e-15


class Location(enum.Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    EXTERIOR = "Exterior"


class ShapeClass(enum.Enum):
    TRIANGLE = "Triangle"
    QUADRILATERAL = "Quadrilateral"
    POLYGON_5PLUS = "PolygonWithAtLeast5ExtremePoints"
    STRICTLY_CONVEX = "StrictlyConvex"


class _Infinite:
    """Marker returned by ``extreme_points`` for strictly convex shapes."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Infinite"


INFINITE = _Infinite()


@dataclass(frozen=True)
class Chord:
    xbar: np.ndarray
    ybar: np.ndarray


def _rot(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def _as_points(P):
    return np.ascontiguousarray(np.asarray(P, dtype=np.float64).reshape(-1, 2))


class ConvexDomain:
    """Shared behaviour; subclasses provide margins, chords, gauge and outline."""

    diameter: float
    center: np.ndarray

    @property
    def tol(self):
        return BOUNDARY_TOL * self.diameter

    # -- point location ----------------------------------------------------
    def margin(self, P):
        """Signed, approximately Euclidean, distance to the boundary (>0 inside)."""
        raise NotImplementedError

    def locate(self, P):
        m = self.margin(_as_points(P))
        codes = np.full(m.shape, 2, dtype=np.int8)
        codes[m >= -self.tol] = 1
        codes[m > self.tol] = 0
        return codes

    def is_interior(self, P):
        return self.margin(_as_points(P)) > self.tol

    def contains(self, p):
        code = int(self.locate(p)[0])
        return (Location.INTERIOR, Location.BOUNDARY, Location.EXTERIOR)[code]

    def require_interior(self, P):
        if not np.all(self.is_interior(P)):
            raise NotInterior()

    # -- chords ------------------------------------------------------------
    def chord_params(self, X, D):
        """Parameters ``t_lo < 0 < t_hi`` where ``X + t D`` crosses the boundary.

        ``X`` must be interior; no validation is done here.
        """
        raise NotImplementedError

    def chord_endpoints(self, x, y):
        x = np.asarray(x, dtype=np.float64).reshape(2)
        y = np.asarray(y, dtype=np.float64).reshape(2)
        d = y - x
        if np.hypot(*d) <= COINCIDENT_EPS * self.diameter:
            raise CoincidentPoints("chord needs two distinct points")
        self.require_interior(np.array([x, y]))
        lo, hi = self.chord_params(x[None], d[None])
        return Chord(xbar=x + lo[0] * d, ybar=x + hi[0] * d)

    def line_chord(self, point, direction):
        """Intersection of the full line ``point + t direction`` with the closed
        domain, as a pair of endpoints, or ``None`` if the line misses the
        interior."""
        raise NotImplementedError

    # -- shape -------------------------------------------------------------
    def extreme_points(self):
        raise NotImplementedError

    def classify_shape(self):
        raise NotImplementedError

    def outline(self, n=256):
        """Closed boundary polyline (vertices for polygons)."""
        raise NotImplementedError

    def gauge(self, P):
        """Minkowski functional about ``self.center``; < 1 inside, 1 on the boundary."""
        raise NotImplementedError

    def bbox(self):
        pts = self.outline(1024)
        return pts.min(axis=0), pts.max(axis=0)

    def sample_interior(self, rng, n, max_gauge=None):
        """``n`` uniform interior points by rejection (optionally gauge-bounded)."""
        lo, hi = self.bbox()
        out = []
        count = 0
        while count < n:
            P = rng.uniform(lo, hi, size=(max(64, 2 * (n - count)), 2))
            keep = self.is_interior(P)
            if max_gauge is not None:
                keep &= self.gauge(P) <= max_gauge
            P = P[keep][: n - count]
            out.append(P)
            count += len(P)
        return np.concatenate(out) if out else np.zeros((0, 2))

    def transformed(self, pmap):
        """Image of the domain under a projective map."""
        raise NotImplementedError

    def to_json(self):
        raise NotImplementedError


# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Polygon(ConvexDomain):
    vertices: np.ndarray
    has_collinear_vertices: bool = field(init=False, default=False)

    def __post_init__(self):
        V = np.array(self.vertices, dtype=np.float64).reshape(-1, 2)
        if len(V) < 3 or not np.all(np.isfinite(V)):
            raise InvalidDomain("polygon needs at least 3 finite vertices")
        area2 = np.sum(V[:, 0] * np.roll(V[:, 1], -1) - np.roll(V[:, 0], -1) * V[:, 1])
        if area2 < 0:
            V = V[::-1].copy()
        E = np.roll(V, -1, axis=0) - V
        lengths = np.hypot(E[:, 0], E[:, 1])
        diam = float(max(np.max(np.hypot(*(V[:, None, :] - V[None, :, :]).transpose(2, 0, 1))), 0))
        if diam == 0 or np.any(lengths <= COINCIDENT_EPS * diam):
            raise InvalidDomain("repeated polygon vertex")
        # turn at vertex i, between edge i-1 and edge i
        Eprev = np.roll(E, 1, axis=0)
        turn = (Eprev[:, 0] * E[:, 1] - Eprev[:, 1] * E[:, 0]) / (np.roll(lengths, 1) * lengths)
        if np.any(turn < -1e-12):
            raise InvalidDomain("polygon is not convex")
        flat = turn <= 1e-12
        if np.all(flat) or abs(area2) <= 1e-12 * diam * diam:
            raise InvalidDomain("polygon is degenerate")
        # a convex vertex sequence that winds more than once is not simple
        dots = np.einsum("ij,ij->i", Eprev, E)
        winding = np.sum(np.arctan2(Eprev[:, 0] * E[:, 1] - Eprev[:, 1] * E[:, 0], dots))
        if winding > 2 * np.pi + 1e-6:
            raise InvalidDomain("polygon vertex sequence winds more than once")

        normals = np.column_stack([E[:, 1], -E[:, 0]]) / lengths[:, None]
        offsets = np.einsum("ij,ij->i", normals, V)
        area = 0.5 * abs(area2)
        cross = V[:, 0] * np.roll(V[:, 1], -1) - np.roll(V[:, 0], -1) * V[:, 1]
        cx = np.sum((V[:, 0] + np.roll(V[:, 0], -1)) * cross) / (6 * area)
        cy = np.sum((V[:, 1] + np.roll(V[:, 1], -1)) * cross) / (6 * area)
        for a in (V, normals, offsets):
            a.setflags(write=False)
        set_ = object.__setattr__
        set_(self, "vertices", V)
        set_(self, "has_collinear_vertices", bool(np.any(flat)))
        set_(self, "normals", normals)
        set_(self, "offsets", offsets)
        set_(self, "diameter", diam)
        set_(self, "center", np.array([cx, cy]))
        set_(self, "_extreme", V[~flat].copy())

    def margin(self, P):
        P = _as_points(P)
        return np.min(self.offsets[None, :] - P @ self.normals.T, axis=1)

    def chord_params(self, X, D):
        return _kernels.polygon_chord_params(self.normals, self.offsets, X, D)

    def line_chord(self, point, direction):
        p = np.asarray(point, dtype=np.float64).reshape(1, 2)
        d = np.asarray(direction, dtype=np.float64).reshape(1, 2)
        lo, hi = _kernels.polygon_chord_params(self.normals, self.offsets, p, d)
        lo, hi = lo[0], hi[0]
        if not (np.isfinite(lo) and np.isfinite(hi)) or (hi - lo) * np.hypot(*d[0]) <= self.tol:
            return None
        mid = p[0] + 0.5 * (lo + hi) * d[0]
        if not self.is_interior(mid)[0]:
            return None
        return p[0] + lo * d[0], p[0] + hi * d[0]

    def extreme_points(self):
        return self._extreme.copy()

    def classify_shape(self):
        k = len(self._extreme)
        if k == 3:
            return ShapeClass.TRIANGLE
        if k == 4:
            return ShapeClass.QUADRILATERAL
        return ShapeClass.POLYGON_5PLUS

    def outline(self, n=256):
        return self.vertices.copy()

    def bbox(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def gauge(self, P):
        P = _as_points(P)
        c = self.center
        return np.max((P - c) @ self.normals.T / (self.offsets - self.normals @ c), axis=1)

    def transformed(self, pmap):
        V = self.vertices
        H = V @ pmap.matrix[:, :2].T + pmap.matrix[:, 2]
        w = H[:, 2]
        if not (np.all(w > 0) or np.all(w < 0)):
            raise InvalidDomain("projective image of the polygon crosses the line at infinity")
        return Polygon(H[:, :2] / w[:, None])

    def to_json(self):
        return {"type": "polygon", "vertices": [[float(a), float(b)] for a, b in self.vertices]}


# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SuperEllipse(ConvexDomain):
    center: tuple
    semi_axes: tuple
    exponent: float = 2.0
    rotation: float = 0.0
    shear: float = 0.0

    def __post_init__(self):
        c = np.array(self.center, dtype=np.float64).reshape(2)
        a, b = (float(s) for s in np.asarray(self.semi_axes, dtype=np.float64).reshape(2))
        p = float(self.exponent)
        if not (a > 0 and b > 0 and np.all(np.isfinite(c))):
            raise InvalidDomain("semi-axes must be positive")
        if not (p > 1 and np.isfinite(p)):
            raise InvalidDomain("superellipse exponent must exceed 1")
        rot = float(self.rotation)
        sh = float(self.shear)
        if not np.isfinite(sh):
            raise InvalidDomain("shear must be finite")
        # unit p-ball -> domain is u -> frame u + center, frame = R(rot) [[a, shear], [0, b]]
        frame = _rot(rot) @ np.array([[a, sh], [0.0, b]])
        W = np.linalg.inv(frame)
        c.setflags(write=False)
        W.setflags(write=False)
        set_ = object.__setattr__
        set_(self, "center", c)
        set_(self, "semi_axes", (a, b))
        set_(self, "exponent", p)
        set_(self, "rotation", rot)
        set_(self, "shear", sh)
        set_(self, "frame", frame)
        set_(self, "inv_frame", W)
        # |frame u| over the unit p-ball peaks at a corner of [-1, 1]^2
        F1, F2 = frame[:, 0], frame[:, 1]
        set_(self, "reach", max(np.hypot(*(F1 + F2)), np.hypot(*(F1 - F2))) * (1 + 1e-9))
        # inscribed radius about the center; the diagonal pinches for p < 2
        smin = float(np.linalg.svd(frame, compute_uv=False)[-1])
        set_(self, "inradius", smin * min(1.0, 2.0 ** (0.5 - 1.0 / p)))
        pts = self.outline(512)
        diffs = pts[:, None, :] - pts[None, :, :]
        set_(self, "diameter", float(np.sqrt(np.max(np.sum(diffs ** 2, axis=2)))))

    def implicit(self, P):
        """``|u|^p + |v|^p - 1`` in the unit frame; negative inside."""
        U = (_as_points(P) - self.center) @ self.inv_frame.T
        return np.abs(U[:, 0]) ** self.exponent + np.abs(U[:, 1]) ** self.exponent - 1.0

    def gauge(self, P):
        return (self.implicit(P) + 1.0) ** (1.0 / self.exponent)

    def margin(self, P):
        return (1.0 - self.gauge(P)) * self.inradius

    def chord_params(self, X, D):
        return _kernels.superellipse_chord_params(self.center, self.inv_frame, self.exponent,
                                                  self.reach, X, D)

    def line_chord(self, point, direction):
        p = np.asarray(point, dtype=np.float64).reshape(2)
        d = np.asarray(direction, dtype=np.float64).reshape(2)
        dn = np.hypot(*d)
        span = (np.hypot(*(p - self.center)) + self.reach) / dn

        def along(t):
            return float(self.implicit(p + t * d)[0])

        res = minimize_scalar(along, bounds=(-span, span), method="bounded",
                              options={"xatol": 1e-12 * span})
        t0 = float(res.x)
        if along(t0) >= -1e-12:
            return None
        base = p + t0 * d
        lo, hi = self.chord_params(base[None], d[None])
        return base + lo[0] * d, base + hi[0] * d

    def extreme_points(self):
        return INFINITE

    def classify_shape(self):
        return ShapeClass.STRICTLY_CONVEX

    def boundary_point(self, theta):
        """Boundary point at parameter angle ``theta``."""
        theta = np.asarray(theta, dtype=np.float64)
        e = 2.0 / self.exponent
        cs, sn = np.cos(theta), np.sin(theta)
        U = np.stack([np.sign(cs) * np.abs(cs) ** e, np.sign(sn) * np.abs(sn) ** e], axis=-1)
        return U @ self.frame.T + self.center

    def outline(self, n=256):
        return self.boundary_point(2 * np.pi * np.arange(n) / n)

    def transformed(self, pmap):
        if self.exponent == 2.0:
            return _ellipse_image(self, pmap)
        if not pmap.is_affine():
            raise InvalidDomain("projective image of a superellipse is only representable for p = 2")
        m = pmap.matrix / pmap.matrix[2, 2]
        A, t = m[:2, :2], m[:2, 2]
        M = A @ self.frame
        if np.linalg.det(M) < 0:
            M = M @ np.diag([1.0, -1.0])  # the unit p-ball is symmetric
        Q, R = np.linalg.qr(M)
        S = np.diag(np.sign(np.diag(R)))
        Q, R = Q @ S, S @ R
        rot = math.atan2(Q[1, 0], Q[0, 0])
        return SuperEllipse(A @ self.center + t, (R[0, 0], R[1, 1]), self.exponent, rot,
                            R[0, 1] if abs(R[0, 1]) > 1e-15 * abs(R).max() else 0.0)

    def to_json(self):
        out = {"type": "superellipse", "center": [float(v) for v in self.center],
                "semi_axes": [float(v) for v in self.semi_axes],
                "rotation": self.rotation, "exponent": self.exponent}
        if self.shear:
            out["shear"] = self.shear
        return out


class Ellipse(SuperEllipse):
    def __init__(self, center, semi_axes, rotation=0.0):
        super().__init__(center, semi_axes, 2.0, rotation)

    def conic(self):
        return _conic(self)

    def to_json(self):
        return {"type": "ellipse", "center": [float(v) for v in self.center],
                "semi_axes": [float(v) for v in self.semi_axes], "rotation": self.rotation}

    def __repr__(self):
        return f"Ellipse(center={self.center.tolist()}, semi_axes={self.semi_axes}, rotation={self.rotation})"


def _conic(dom):
    """Symmetric 3x3 Q with ``p^T Q p < 0`` exactly on the interior (p = 2 only)."""
    G = np.eye(3)
    G[:2, :2] = dom.inv_frame
    G[:2, 2] = -dom.inv_frame @ dom.center
    return G.T @ np.diag([1.0, 1.0, -1.0]) @ G


def _ellipse_image(dom, pmap):
    Tinv = np.linalg.inv(pmap.matrix)
    Q = Tinv.T @ _conic(dom) @ Tinv
    Q = Q / np.max(np.abs(Q))
    A, b, c = Q[:2, :2], Q[:2, 2], Q[2, 2]
    if np.linalg.det(A) <= 0:
        raise InvalidDomain("projective image of the ellipse is not bounded")
    center = -np.linalg.solve(A, b)
    k = c - b @ np.linalg.solve(A, b)
    S = A / -k
    evals, evecs = np.linalg.eigh(S)
    if np.any(evals <= 0):
        raise InvalidDomain("projective image of the ellipse is not bounded")
    if np.linalg.det(evecs) < 0:
        evecs[:, 1] *= -1
    rot = math.atan2(evecs[1, 0], evecs[0, 0])
    image = Ellipse(center, 1.0 / np.sqrt(evals), rot)
    if type(dom) is SuperEllipse:
        return SuperEllipse(image.center, image.semi_axes, 2.0, image.rotation)
    return image


# ---------------------------------------------------------------------------
# module-level API

def contains(domain, p):
    return domain.contains(p)


def chord_endpoints(domain, x, y):
    return domain.chord_endpoints(x, y)


def extreme_points(domain):
    return domain.extreme_points()


def classify_shape(domain):
    return domain.classify_shape()


def regular_polygon(n, radius=1.0, center=(0.0, 0.0), phase=0.0):
    k = np.arange(n)
    ang = phase + 2 * np.pi * k / n
    return Polygon(np.column_stack([center[0] + radius * np.cos(ang), center[1] + radius * np.sin(ang)]))


def unit_disk():
    return Ellipse((0.0, 0.0), (1.0, 1.0), 0.0)


def domain_from_json(obj):
    kind = obj.get("type")
    try:
        if kind == "polygon":
            return Polygon(obj["vertices"])
        if kind == "ellipse":
            return Ellipse(obj["center"], obj["semi_axes"], obj.get("rotation", 0.0))
        if kind == "superellipse":
            return SuperEllipse(obj["center"], obj["semi_axes"], obj["exponent"],
                                obj.get("rotation", 0.0), obj.get("shear", 0.0))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidDomain):
            raise
        raise InvalidDomain(f"malformed {kind} domain: {exc}") from exc
    raise InvalidDomain(f"unknown domain type {kind!r}")


def domain_to_json(domain):
    return domain.to_json()
