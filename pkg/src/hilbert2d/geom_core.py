"""Projective-plane primitives: homogeneous points and lines, the cross-ratio,
projective maps and a normalized DLT fit.

Points are accepted either as :class:`HomPoint` or as anything numpy can turn
into a length-2 (affine) or length-3 (homogeneous) vector.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateConfiguration, NonCollinear, PointAtInfinity

COLLINEAR_TOL = 1e-9
DENOM_EPS = 1e-13
INFINITY_EPS = 1e-13
DET_TOL = 1e-12


def _normalize(v):
    v = np.asarray(v, dtype=np.float64)
    i = int(np.argmax(np.abs(v)))
    return v / v[i]


@dataclass(frozen=True, eq=False)
class HomPoint:
    """Point of RP^2 in homogeneous coordinates (x : y : w)."""

    coords: tuple

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=np.float64).reshape(-1)
        if c.shape != (3,):
            raise ValueError("HomPoint needs exactly three coordinates")
        if not np.all(np.isfinite(c)) or not np.any(c):
            raise ValueError("HomPoint coordinates must be finite and not all zero")
        object.__setattr__(self, "coords", tuple(float(a) for a in c))

    @classmethod
    def from_affine(cls, xy):
        x, y = np.asarray(xy, dtype=np.float64).reshape(2)
        return cls((x, y, 1.0))

    @classmethod
    def at_infinity(cls, direction):
        dx, dy = np.asarray(direction, dtype=np.float64).reshape(2)
        return cls((dx, dy, 0.0))

    @property
    def vector(self):
        return np.array(self.coords)

    def normalized(self):
        """Representative with the largest-magnitude coordinate equal to 1."""
        return _normalize(self.coords)

    @property
    def is_at_infinity(self):
        return abs(self.normalized()[2]) < INFINITY_EPS

    def affine(self):
        v = self.normalized()
        if abs(v[2]) < INFINITY_EPS:
            raise PointAtInfinity(f"{self!r} has no affine image")
        return v[:2] / v[2]

    def equals(self, other, tol=1e-12):
        a = self.normalized()
        b = as_hom(other).normalized()
        return bool(np.allclose(a, b, rtol=0, atol=tol) or np.allclose(a, -b, rtol=0, atol=tol))

    def __eq__(self, other):
        if not isinstance(other, HomPoint):
            return NotImplemented
        return self.equals(other)

    def __hash__(self):
        return hash(tuple(np.round(np.abs(self.normalized()), 9)))

    def __repr__(self):
        return "HomPoint({:.12g}, {:.12g}, {:.12g})".format(*self.coords)


@dataclass(frozen=True, eq=False)
class ProjLine:
    """Line a*x + b*y + c*w = 0 of RP^2."""

    coeffs: tuple

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.float64).reshape(-1)
        if c.shape != (3,) or not np.any(c):
            raise ValueError("ProjLine needs three coefficients, not all zero")
        object.__setattr__(self, "coeffs", tuple(float(a) for a in c))

    @classmethod
    def through(cls, p, q):
        return cls(np.cross(as_hom(p).normalized(), as_hom(q).normalized()))

    def incidence(self, p):
        """Scale-free incidence value: |<l, p>| / (|l| |p|)."""
        lv = np.array(self.coeffs)
        pv = as_hom(p).normalized()
        return abs(lv @ pv) / (np.linalg.norm(lv) * np.linalg.norm(pv))

    def contains(self, p, tol=COLLINEAR_TOL):
        return self.incidence(p) <= tol

    def meet(self, other):
        return HomPoint(np.cross(_normalize(self.coeffs), _normalize(other.coeffs)))


def as_hom(p):
    if isinstance(p, HomPoint):
        return p
    v = np.asarray(p, dtype=np.float64).reshape(-1)
    if v.shape == (2,):
        return HomPoint((v[0], v[1], 1.0))
    return HomPoint(v)


def as_affine(p):
    if isinstance(p, HomPoint):
        return p.affine()
    v = np.asarray(p, dtype=np.float64).reshape(-1)
    if v.shape == (2,):
        return v
    return HomPoint(v).affine()


@dataclass(frozen=True, eq=False)
class ProjMap:
    """Projective transformation of RP^2, a 3x3 matrix modulo scale."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.float64).reshape(3, 3)
        fro = np.linalg.norm(m)
        if not np.isfinite(fro) or fro == 0 or abs(np.linalg.det(m / fro)) < DET_TOL:
            raise DegenerateConfiguration("singular projective matrix")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls):
        return cls(np.eye(3))

    @classmethod
    def from_affine(cls, A, t=(0.0, 0.0)):
        m = np.eye(3)
        m[:2, :2] = A
        m[:2, 2] = t
        return cls(m)

    def normalized_matrix(self):
        """Unit Frobenius norm, sign fixed so the largest entry is positive."""
        m = self.matrix / np.linalg.norm(self.matrix)
        i = np.unravel_index(np.argmax(np.abs(m)), m.shape)
        return m * np.sign(m[i])

    def inverse(self):
        return ProjMap(np.linalg.inv(self.matrix))

    def __matmul__(self, other):
        return ProjMap(self.matrix @ other.matrix)

    def __call__(self, p):
        return apply(self, p)

    def apply_affine(self, pts):
        """Map an (n, 2) array of affine points; raises if any image is at infinity."""
        P = np.asarray(pts, dtype=np.float64)
        single = P.ndim == 1
        P = P.reshape(-1, 2)
        H = P @ self.matrix[:, :2].T + self.matrix[:, 2]
        scale = np.abs(H).max(axis=1)
        if np.any(np.abs(H[:, 2]) < INFINITY_EPS * scale):
            raise PointAtInfinity("image lies on the line at infinity")
        out = H[:, :2] / H[:, 2:3]
        return out[0] if single else out

    def is_affine(self, tol=1e-14):
        m = self.matrix / self.matrix[2, 2] if self.matrix[2, 2] != 0 else self.matrix
        return abs(m[2, 0]) <= tol and abs(m[2, 1]) <= tol

    def equals(self, other, tol=1e-6):
        """Equality up to scale, measured as relative Frobenius error."""
        return relative_matrix_error(self.matrix, other.matrix) <= tol

    def to_json(self):
        return [float(a) for a in self.matrix.reshape(-1)]

    @classmethod
    def from_json(cls, data):
        return cls(np.asarray(data, dtype=np.float64).reshape(3, 3))

    def __repr__(self):
        return f"ProjMap({np.array2string(self.matrix, precision=6)})"


def relative_matrix_error(a, b):
    """min over the sign of |a/|a| -+ b/|b|| (Frobenius)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    return float(min(np.linalg.norm(a - b), np.linalg.norm(a + b)))


def apply(pmap, p):
    return HomPoint(pmap.matrix @ as_hom(p).normalized())


# ---------------------------------------------------------------------------

def collinearity_defect(points):
    """Largest distance from a point to the total-least-squares line of the set."""
    P = np.array([as_affine(p) for p in points]) if not isinstance(points, np.ndarray) else points
    P = np.asarray(P, dtype=np.float64).reshape(-1, 2)
    if len(P) < 3:
        return 0.0
    Q = P - P.mean(axis=0)
    if not np.any(Q):
        return 0.0
    # right singular vector of the smallest singular value is the line normal
    _, _, vt = np.linalg.svd(Q, full_matrices=False)
    return float(np.max(np.abs(Q @ vt[-1])))


def cross_ratio(x, y, xbar, ybar, tol=COLLINEAR_TOL):
    """(x, y; xbar, ybar) = |ybar - x| / |ybar - y| * |xbar - y| / |xbar - x|."""
    x, y, xbar, ybar = (as_affine(p) for p in (x, y, xbar, ybar))
    pts = np.array([x, y, xbar, ybar])
    span = max(1.0, float(np.ptp(pts, axis=0).max()))
    if collinearity_defect(pts) > tol * span:
        raise NonCollinear("cross-ratio needs four collinear points")
    d_ybar_y = np.linalg.norm(ybar - y)
    d_xbar_x = np.linalg.norm(xbar - x)
    if d_ybar_y < DENOM_EPS or d_xbar_x < DENOM_EPS:
        raise DegenerateConfiguration("point coincides with a chord endpoint")
    return float(np.linalg.norm(ybar - x) / d_ybar_y * (np.linalg.norm(xbar - y) / d_xbar_x))


# ---------------------------------------------------------------------------
# normalized DLT

def _isotropic_normalizer(P):
    c = P.mean(axis=0)
    rms = np.sqrt(np.mean(np.sum((P - c) ** 2, axis=1)))
    if rms == 0:
        raise DegenerateConfiguration("all points coincide")
    s = np.sqrt(2.0) / rms
    return np.array([[s, 0.0, -s * c[0]], [0.0, s, -s * c[1]], [0.0, 0.0, 1.0]])


def _split_correspondences(correspondences):
    if isinstance(correspondences, tuple) and len(correspondences) == 2 \
            and isinstance(correspondences[0], np.ndarray):
        src, dst = correspondences
    else:
        pairs = list(correspondences)
        src = [as_affine(s) for s, _ in pairs]
        dst = [as_affine(t) for _, t in pairs]
    return np.asarray(src, dtype=np.float64).reshape(-1, 2), np.asarray(dst, dtype=np.float64).reshape(-1, 2)


def transfer_errors(pmap, src, dst):
    """Per-correspondence symmetric transfer error max(|H s - t|, |H^-1 t - s|)."""
    src = np.asarray(src, dtype=np.float64).reshape(-1, 2)
    dst = np.asarray(dst, dtype=np.float64).reshape(-1, 2)
    try:
        fwd = np.linalg.norm(pmap.apply_affine(src) - dst, axis=1)
        bwd = np.linalg.norm(pmap.inverse().apply_affine(dst) - src, axis=1)
    except PointAtInfinity:
        return np.full(len(src), np.inf)
    return np.maximum(fwd, bwd)


def fit_projective(correspondences, rank_tol=1e-10):
    """Least-squares projective map from >= 4 point correspondences.

    ``correspondences`` is a sequence of ``(source, target)`` pairs, or a
    tuple ``(src, dst)`` of (n, 2) arrays. Returns ``(ProjMap, residual)``
    where the residual is the largest symmetric transfer error.
    """
    src, dst = _split_correspondences(correspondences)
    n = len(src)
    if n < 4:
        raise DegenerateConfiguration("need at least 4 correspondences")
    first = src[:4]
    for i in range(4):
        for j in range(i + 1, 4):
            for k in range(j + 1, 4):
                u, v = first[j] - first[i], first[k] - first[i]
                scale = max(np.linalg.norm(u), np.linalg.norm(v), 1e-300)
                if abs(u[0] * v[1] - u[1] * v[0]) <= COLLINEAR_TOL * scale * scale:
                    raise DegenerateConfiguration("three of the first four source points are collinear")

    Ts = _isotropic_normalizer(src)
    Td = _isotropic_normalizer(dst)
    s = src @ Ts[:2, :2].T + Ts[:2, 2]
    d = dst @ Td[:2, :2].T + Td[:2, 2]

    A = np.zeros((2 * n, 9))
    ones = np.ones(n)
    zeros = np.zeros((n, 3))
    sh = np.column_stack([s, ones])
    A[0::2, 0:3] = sh
    A[0::2, 3:6] = zeros
    A[0::2, 6:9] = -d[:, 0:1] * sh
    A[1::2, 0:3] = zeros
    A[1::2, 3:6] = sh
    A[1::2, 6:9] = -d[:, 1:2] * sh

    _, sv, vt = np.linalg.svd(A)
    if sv[7] <= rank_tol * sv[0]:
        raise DegenerateConfiguration("design matrix has rank < 8")
    Hn = vt[-1].reshape(3, 3)
    H = np.linalg.inv(Td) @ Hn @ Ts
    pmap = ProjMap(H / np.linalg.norm(H))
    residual = float(np.max(transfer_errors(pmap, src, dst)))
    return pmap, residual
