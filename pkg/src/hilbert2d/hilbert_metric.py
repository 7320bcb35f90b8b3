"""Hilbert distance, straight-chord additivity, a grid probe for geodesic
uniqueness, and metric balls.

Distances are in nats: ``d(x, y) = ln (x, y; xbar, ybar)`` with no factor 1/2.
"""
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import CoincidentPoints, NotInterior

GEODESIC_THRESHOLD = 1e-9
BALL_BISECTION_ITERS = 60


@dataclass(frozen=True)
class GeodesicReport:
    additivity_defect: float
    witness: np.ndarray = None
    threshold: float = GEODESIC_THRESHOLD

    @property
    def nonunique(self):
        """True when an off-segment witness certifies a second geodesic."""
        return self.additivity_defect < self.threshold

    def to_json(self):
        return {
            "additivity_defect": float(self.additivity_defect),
            "witness": None if self.witness is None else [float(v) for v in self.witness],
            "nonunique": bool(self.nonunique),
        }


def _pts(P):
    return np.ascontiguousarray(np.asarray(P, dtype=np.float64).reshape(-1, 2))


def distances(domain, X, Y, check=True):
    """Row-wise Hilbert distances between two (n, 2) arrays of interior points."""
    X, Y = np.broadcast_arrays(_pts(X), _pts(Y))
    X = np.ascontiguousarray(X)
    Y = np.ascontiguousarray(Y)
    if check and not (np.all(domain.is_interior(X)) and np.all(domain.is_interior(Y))):
        raise NotInterior()
    D = Y - X
    gap = np.hypot(D[:, 0], D[:, 1])
    out = np.zeros(len(X))
    live = gap > 1e-15 * domain.diameter
    if np.any(live):
        Xl = np.ascontiguousarray(X[live])
        Dl = np.ascontiguousarray(D[live])
        lo, hi = domain.chord_params(Xl, Dl)
        out[live] = _kernels.log_cross_ratio(lo, hi)
    return out


def distance(domain, x, y):
    """Hilbert distance between two interior points of ``domain``."""
    return float(distances(domain, x, y)[0])


def segment_additivity(domain, x, z, y):
    """``d(x, z) + d(z, y) - d(x, y)``; zero when z lies on [x, y]."""
    d = distances(domain, [x, z, x], [z, y, y])
    return float(d[0] + d[1] - d[2])


def _segment_distance(P, x, y):
    d = y - x
    t = np.clip((P - x) @ d / (d @ d), 0.0, 1.0)
    return np.hypot(*(P - x - t[:, None] * d).T)


def unique_geodesic_probe(domain, x, y, grid_resolution=200, exclusion=1e-3,
                          threshold=GEODESIC_THRESHOLD):
    """Smallest additivity defect over interior grid points away from [x, y].

    A defect below ``threshold`` certifies that [x, y] is not the unique
    geodesic. A defect bounded away from zero is only evidence of uniqueness:
    the grid is finite.
    """
    x = np.asarray(x, dtype=np.float64).reshape(2)
    y = np.asarray(y, dtype=np.float64).reshape(2)
    domain.require_interior(np.array([x, y]))
    if np.hypot(*(y - x)) <= 1e-15 * domain.diameter:
        raise CoincidentPoints("probe needs two distinct points")
    lo, hi = domain.bbox()
    gx = np.linspace(lo[0], hi[0], grid_resolution)
    gy = np.linspace(lo[1], hi[1], grid_resolution)
    Z = np.stack(np.meshgrid(gx, gy, indexing="xy"), axis=-1).reshape(-1, 2)
    Z = Z[domain.is_interior(Z)]
    Z = np.ascontiguousarray(Z[_segment_distance(Z, x, y) > exclusion])
    if len(Z) == 0:
        return GeodesicReport(np.inf, None, threshold)
    dxz = distances(domain, np.broadcast_to(x, Z.shape), Z, check=False)
    dzy = distances(domain, Z, np.broadcast_to(y, Z.shape), check=False)
    defect = dxz + dzy - distance(domain, x, y)
    k = int(np.argmin(defect))
    return GeodesicReport(float(defect[k]), Z[k].copy(), threshold)


def metric_ball(domain, center, radius, n_directions=64):
    """Boundary of the Hilbert ball, one point per ray from ``center``.

    Returns an (n_directions, 2) array, to be read as a closed polyline.
    """
    c = np.asarray(center, dtype=np.float64).reshape(2)
    if n_directions < 8:
        raise ValueError("metric_ball needs at least 8 directions")
    if radius < 0:
        raise ValueError("radius must be non-negative")
    domain.require_interior(c)
    theta = 2 * np.pi * np.arange(n_directions) / n_directions
    U = np.column_stack([np.cos(theta), np.sin(theta)])
    lo, hi = domain.chord_params(np.repeat(c[None], n_directions, axis=0), U)
    # d(c, c + t u) is increasing in t on (0, hi)
    a = np.zeros(n_directions)
    b = hi.copy()
    for _ in range(BALL_BISECTION_ITERS):
        t = 0.5 * (a + b)
        d = np.log(hi / (hi - t)) + np.log1p(-t / lo)
        below = d < radius
        a = np.where(below, t, a)
        b = np.where(below, b, t)
    t = 0.5 * (a + b)
    return c + t[:, None] * U
