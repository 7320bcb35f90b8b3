"""Shape catalogue, closed-form map families, and the theorem sweep.

Map families
------------
``projective``   a projective map T together with the target domain T(Omega),
``perturbed``    T composed with a radial reparametrisation that keeps Omega
                 onto itself but bends lines,
``reciprocal``   the non-projective triangle isometry,
``squeeze``      (x, y) -> (s x, y), for domains it keeps inside,
``identity``.
"""
import math
from dataclasses import dataclass

import numpy as np

from .convex_domain import (Ellipse, Polygon, ShapeClass, SuperEllipse, regular_polygon)
from .errors import InvalidDomain
from .geom_core import ProjMap
from .simplex_special import hex_symmetries, hex_symmetry_map, reciprocal_triangle_map
from .webs_isometry import ClassifyConfig, SampledMap, Verdict, classify_map, probe_points

PERTURBATION = 1e-2


def default_catalogue():
    """(name, domain) pairs swept by :func:`verify_theorem`."""
    pent = Polygon([(0.0, 0.0), (1.0, -0.1), (1.4, 0.7), (0.6, 1.3), (-0.3, 0.8)])
    return [
        ("ellipse", Ellipse((0.1, -0.2), (1.3, 0.8), 0.4)),
        ("superellipse-1.5", SuperEllipse((0.0, 0.0), (1.0, 0.7), 1.5, 0.3)),
        ("superellipse-2", SuperEllipse((0.2, 0.1), (0.9, 0.6), 2.0, -0.5)),
        ("superellipse-4", SuperEllipse((0.0, 0.0), (1.0, 0.8), 4.0, 0.2)),
        ("pentagon", pent),
        ("hexagon", regular_polygon(6, 1.0, (0.0, 0.0), 0.1)),
        ("square", Polygon([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])),
        ("triangle", Polygon([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])),
    ]


# ---------------------------------------------------------------------------
# projective isometries

def _frame_matrix(center, frame):
    m = np.eye(3)
    m[:2, :2] = frame
    m[:2, 2] = center
    return m


def _rot(a):
    return np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]])


def _boost(eta, phi):
    """Projective automorphism of the unit disk (a Klein-model translation)."""
    B = np.array([[math.cosh(eta), 0.0, math.sinh(eta)],
                  [0.0, 1.0, 0.0],
                  [math.sinh(eta), 0.0, math.cosh(eta)]])
    R = np.eye(3)
    R[:2, :2] = _rot(phi)
    return R @ B @ R.T


def random_projective_map(domain, rng):
    """A well-conditioned projective map keeping ``domain`` in the affine chart.

    Polygons get a general projective map; ellipses a disk automorphism
    conjugated by affine frames; other superellipses an affine map sending
    frame to frame (their only representable projective images).
    """
    if isinstance(domain, Polygon):
        c = domain.center
        R = np.max(np.hypot(*(domain.vertices - c).T))
        A = _rot(rng.uniform(0, 2 * np.pi)) @ np.diag(rng.uniform(0.6, 1.6, 2)) @ _rot(rng.uniform(0, 2 * np.pi))
        ang = rng.uniform(0, 2 * np.pi)
        g = rng.uniform(0.1, 0.4) / R * np.array([math.cos(ang), math.sin(ang)])
        t = rng.uniform(-1, 1, 2)
        m = np.eye(3)
        m[:2, :2] = A
        m[:2, 2] = t - A @ c
        m[2, :2] = g
        m[2, 2] = 1.0 - g @ c
        return ProjMap(m)
    a1 = np.linalg.inv(_frame_matrix(domain.center, domain.frame))
    a, b = rng.uniform(0.5, 1.5, 2)
    a2 = _frame_matrix(rng.uniform(-1, 1, 2), _rot(rng.uniform(0, np.pi)) @ np.diag([a, b]))
    if domain.exponent == 2.0:
        core = _boost(rng.uniform(0.3, 0.8), rng.uniform(0, 2 * np.pi))
    else:
        S = np.diag(rng.choice([-1.0, 1.0], 2))
        if rng.random() < 0.5:
            S = S @ np.array([[0.0, 1.0], [1.0, 0.0]])
        core = np.eye(3)
        core[:2, :2] = S
    return ProjMap(a2 @ core @ a1)


def radial_perturbation(domain, eps=PERTURBATION):
    """p -> c + (p - c)(1 + eps (1 - F(p))), F the gauge about c.

    ``s -> s (1 + eps (1 - s))`` is increasing on [0, 1] for eps < 1 and fixes
    0 and 1, so the map is a homeomorphism of the domain onto itself.
    """
    c = domain.center

    def f(P):
        P = np.asarray(P, dtype=np.float64).reshape(-1, 2)
        F = domain.gauge(P)
        return c + (P - c) * (1.0 + eps * (1.0 - F))[:, None]

    return f


def squeeze_map(factor=0.9):
    def f(P):
        P = np.asarray(P, dtype=np.float64).reshape(-1, 2)
        return P * np.array([factor, 1.0])

    return f


def _compose(T, g):
    def f(P):
        return T.apply_affine(g(P))

    return f


def map_family(family, domain, rng, **params):
    """Return ``(callable, target_domain, expected_verdict)`` for a family name."""
    if family == "identity":
        return (lambda P: np.asarray(P, dtype=np.float64).reshape(-1, 2)), domain, Verdict.PROJECTIVE_ISOMETRY
    if family == "projective":
        T = random_projective_map(domain, rng)
        return T.apply_affine, domain.transformed(T), Verdict.PROJECTIVE_ISOMETRY
    if family == "perturbed":
        T = random_projective_map(domain, rng)
        eps = float(params.get("eps", PERTURBATION))
        return _compose(T, radial_perturbation(domain, eps)), domain.transformed(T), Verdict.NOT_ISOMETRY
    if family == "reciprocal":
        if domain.classify_shape() is not ShapeClass.TRIANGLE:
            raise InvalidDomain("the reciprocal map needs a triangle")
        return reciprocal_triangle_map(domain), domain, Verdict.NON_PROJECTIVE_ISOMETRY
    if family == "hex-symmetry":
        if domain.classify_shape() is not ShapeClass.TRIANGLE:
            raise InvalidDomain("hex symmetries need a triangle")
        k = int(params.get("index", 0))
        M = hex_symmetries()[k]
        projective = k % 2 == 0 if k < 6 else (k - 6) % 2 == 0
        expected = Verdict.PROJECTIVE_ISOMETRY if projective else Verdict.NON_PROJECTIVE_ISOMETRY
        return hex_symmetry_map(domain, M), domain, expected
    if family == "squeeze":
        f = squeeze_map(float(params.get("factor", 0.9)))
        return f, domain, Verdict.NOT_ISOMETRY
    raise ValueError(f"unknown map family {family!r}")


MAP_FAMILIES = ("identity", "projective", "perturbed", "reciprocal", "hex-symmetry", "squeeze")


def make_sampled_map(family, domain, seed=0, n_samples=None, config=None, **params):
    """Sample table for a named map family, including every probe point the
    classifier will query, so the table alone can be classified."""
    cfg = config or ClassifyConfig(seed=seed)
    rng = np.random.default_rng(seed)
    f, target, _ = map_family(family, domain, rng, **params)
    n = n_samples if n_samples is not None else max(cfg.pairs, 20)
    extra = probe_points(domain, cfg.lines_per_pole, cfg.samples_per_line)
    probe = {"lines_per_pole": cfg.lines_per_pole, "samples_per_line": cfg.samples_per_line}
    return SampledMap.from_function(f, domain, target, n=n, seed=seed + 1,
                                    extra_points=extra, probe_config=probe)


# ---------------------------------------------------------------------------
# theorem sweep

@dataclass(frozen=True)
class TheoremRow:
    name: str
    shape: str
    family: str
    expected: str
    verdict: str
    isometry_defect: float
    collineation_defect: float
    residual: float

    @property
    def match(self):
        return self.expected == self.verdict


def families_for(domain):
    fams = ["projective", "perturbed"]
    if domain.classify_shape() is ShapeClass.TRIANGLE:
        fams.append("reciprocal")
    return fams


def verify_theorem(catalogue=None, config=None):
    """Classify every (shape, map family) combination and compare with the
    prediction: projective maps and perturbed maps behave the same on every
    shape, and only triangles admit a non-projective isometry."""
    cfg = config or ClassifyConfig()
    cat = default_catalogue() if catalogue is None else catalogue
    rows = []
    for k, (name, dom) in enumerate(cat):
        for j, fam in enumerate(families_for(dom)):
            seed = cfg.seed + 1000 * k + j
            rng = np.random.default_rng(seed)
            f, target, expected = map_family(fam, dom, rng)
            smap = SampledMap.from_function(f, dom, target, n=max(cfg.pairs, 20), seed=seed)
            rep = classify_map(smap, cfg.pairs, cfg)
            rows.append(TheoremRow(name, dom.classify_shape().value, fam, expected.value,
                                   rep.verdict.value, rep.isometry_defect,
                                   rep.collineation_defect, rep.residual))
    return rows
