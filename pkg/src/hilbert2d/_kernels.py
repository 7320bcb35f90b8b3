"""Hot inner loops: chord parameters along lines and the log cross-ratio.

Every kernel exists twice: a plain-numpy vectorized version and a numba
``@njit`` loop version. Both do the same floating point operations in the
same order, so they agree to the last ulp on the polygon path and to a few
ulps on the smooth path (``pow`` may round differently).

The numba path is used when numba imports and ``HILBERT2D_NUMBA`` is not set
to ``0``/``false``/``no``/``off``.

Conventions: a line is ``X + t * D``. ``chord params`` are the two parameters
``t_lo < 0 < t_hi`` where the line leaves the domain, i.e. the chord endpoints
are ``X + t_lo * D`` and ``X + t_hi * D``. With ``D = y - x`` the point ``y``
sits at ``t = 1``.
"""
import os

import numpy as np

BISECTION_ITERS = 80


def _env_wants_numba():
    flag = os.environ.get("HILBERT2D_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "no", "off")


try:
    import numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _env_wants_numba()


# ---------------------------------------------------------------------------
# numpy implementations

def _pabs_np(u, p):
    """``|u|^p``, with products instead of pow for the common exponents."""
    a = np.abs(u)
    if p == 2.0:
        return a * a
    if p == 4.0:
        a2 = a * a
        return a2 * a2
    if p == 1.5:
        return a * np.sqrt(a)
    return a ** p


def polygon_chord_params_np(normals, offsets, X, D):
    """Cyrus-Beck clipping of the lines ``X + t D`` against ``n.p <= h``."""
    nd = D @ normals.T                                   # (n, m)
    slack = offsets[None, :] - X @ normals.T             # (n, m)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = slack / nd
    hi = np.where(nd > 0, t, np.inf).min(axis=1)
    lo = np.where(nd < 0, t, -np.inf).max(axis=1)
    return lo, hi


def superellipse_chord_params_np(center, W, p, reach, X, D, iters=BISECTION_ITERS):
    """Bisection on ``|u1|^p + |u2|^p = 1`` with ``u = W (q - center)``."""
    n = X.shape[0]
    dx = X - center
    dn = np.hypot(D[:, 0], D[:, 1])
    bracket = (np.hypot(dx[:, 0], dx[:, 1]) + reach) / dn
    out = np.empty((2, n))
    for j, sign in enumerate((1.0, -1.0)):
        lo = np.zeros(n)
        hi = bracket.copy()
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            qx = dx[:, 0] + sign * mid * D[:, 0]
            qy = dx[:, 1] + sign * mid * D[:, 1]
            u0 = W[0, 0] * qx + W[0, 1] * qy
            u1 = W[1, 0] * qx + W[1, 1] * qy
            s = _pabs_np(u0, p) + _pabs_np(u1, p)
            inside = s < 1.0
            lo = np.where(inside, mid, lo)
            hi = np.where(inside, hi, mid)
        out[j] = 0.5 * (lo + hi)
    return -out[1], out[0]


def log_cross_ratio_np(t_lo, t_hi):
    return np.log1p(1.0 / (t_hi - 1.0)) + np.log1p(-1.0 / t_lo)


# ---------------------------------------------------------------------------
# numba implementations

def _polygon_chord_params_loop(normals, offsets, X, D):
    n = X.shape[0]
    m = normals.shape[0]
    lo_out = np.empty(n)
    hi_out = np.empty(n)
    for k in range(n):
        lo = -np.inf
        hi = np.inf
        for i in range(m):
            nd = D[k, 0] * normals[i, 0] + D[k, 1] * normals[i, 1]
            nx = X[k, 0] * normals[i, 0] + X[k, 1] * normals[i, 1]
            slack = offsets[i] - nx
            if nd > 0.0:
                t = slack / nd
                if t < hi:
                    hi = t
            elif nd < 0.0:
                t = slack / nd
                if t > lo:
                    lo = t
        lo_out[k] = lo
        hi_out[k] = hi
    return lo_out, hi_out


def _pabs_scalar(u, p):
    a = abs(u)
    if p == 2.0:
        return a * a
    if p == 4.0:
        a2 = a * a
        return a2 * a2
    if p == 1.5:
        return a * np.sqrt(a)
    return a ** p


def _make_superellipse_loop(pabs):
    def _superellipse_chord_params_loop(center, W, p, reach, X, D, iters=BISECTION_ITERS):
        n = X.shape[0]
        lo_out = np.empty(n)
        hi_out = np.empty(n)
        for k in range(n):
            dx0 = X[k, 0] - center[0]
            dx1 = X[k, 1] - center[1]
            dn = np.hypot(D[k, 0], D[k, 1])
            bracket = (np.hypot(dx0, dx1) + reach) / dn
            for j in range(2):
                sign = 1.0 if j == 0 else -1.0
                lo = 0.0
                hi = bracket
                for _ in range(iters):
                    mid = 0.5 * (lo + hi)
                    qx = dx0 + sign * mid * D[k, 0]
                    qy = dx1 + sign * mid * D[k, 1]
                    u0 = W[0, 0] * qx + W[0, 1] * qy
                    u1 = W[1, 0] * qx + W[1, 1] * qy
                    s = pabs(u0, p) + pabs(u1, p)
                    if s < 1.0:
                        lo = mid
                    else:
                        hi = mid
                if j == 0:
                    hi_out[k] = 0.5 * (lo + hi)
                else:
                    lo_out[k] = -0.5 * (lo + hi)
        return lo_out, hi_out

    return _superellipse_chord_params_loop

def _log_cross_ratio_loop(t_lo, t_hi):
    n = t_lo.shape[0]
    out = np.empty(n)
    for k in range(n):
        out[k] = np.log1p(1.0 / (t_hi[k] - 1.0)) + np.log1p(-1.0 / t_lo[k])
    return out


if HAVE_NUMBA:
    _jit = numba.njit(cache=True, nogil=True)
    polygon_chord_params_nb = _jit(_polygon_chord_params_loop)
    superellipse_chord_params_nb = _jit(_make_superellipse_loop(_jit(_pabs_scalar)))
    log_cross_ratio_nb = _jit(_log_cross_ratio_loop)
else:  # pragma: no cover
    polygon_chord_params_nb = _polygon_chord_params_loop
    superellipse_chord_params_nb = _make_superellipse_loop(_pabs_scalar)
    log_cross_ratio_nb = _log_cross_ratio_loop


BACKENDS = {
    "numpy": (polygon_chord_params_np, superellipse_chord_params_np, log_cross_ratio_np),
    "numba": (polygon_chord_params_nb, superellipse_chord_params_nb, log_cross_ratio_nb),
}


def _as2d(a):
    return np.ascontiguousarray(np.asarray(a, dtype=np.float64).reshape(-1, 2))


def polygon_chord_params(normals, offsets, X, D, backend=None):
    fn = BACKENDS[backend or active_backend()][0]
    return fn(np.ascontiguousarray(normals, dtype=np.float64),
              np.ascontiguousarray(offsets, dtype=np.float64), _as2d(X), _as2d(D))


def superellipse_chord_params(center, W, p, reach, X, D, iters=BISECTION_ITERS, backend=None):
    fn = BACKENDS[backend or active_backend()][1]
    return fn(np.ascontiguousarray(center, dtype=np.float64),
              np.ascontiguousarray(W, dtype=np.float64), float(p), float(reach),
              _as2d(X), _as2d(D), int(iters))


def log_cross_ratio(t_lo, t_hi, backend=None):
    fn = BACKENDS[backend or active_backend()][2]
    return fn(np.ascontiguousarray(t_lo, dtype=np.float64),
              np.ascontiguousarray(t_hi, dtype=np.float64))


def active_backend():
    return "numba" if USE_NUMBA else "numpy"


def warmup():
    """Trigger JIT compilation of all numba kernels (no-op on the numpy path)."""
    if not USE_NUMBA:
        return
    normals = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    offsets = np.ones(4)
    X = np.zeros((1, 2))
    D = np.array([[0.5, 0.0]])
    lo, hi = polygon_chord_params(normals, offsets, X, D)
    superellipse_chord_params(np.zeros(2), np.eye(2), 2.0, 1.0, X, D)
    log_cross_ratio(lo, hi)
