"""Pencils of lines, webs, straightness checks on mapped lines, and the map
classifier.

A candidate map is anything with an ``evaluate``-style behaviour: a
:class:`SampledMap`, a :class:`~hilbert2d.geom_core.ProjMap`, or a plain
callable taking and returning (n, 2) arrays.

Classification, in short: a map whose pairwise distances agree is an
isometry; it is a *projective* isometry when, in addition, lines through the
chosen poles stay straight and a single projective matrix reproduces every
sample. Lines through extreme points are unique geodesics, so an isometry must
keep them straight; five such pencils (four vertex pencils for a
quadrilateral) force a projective map, except on triangles.
"""
import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .convex_domain import (Chord, ConvexDomain, Location, ShapeClass,
                            domain_from_json, domain_to_json)
from .errors import (DegenerateConfiguration, DegenerateQuadrilateral, HilbertError,
                     InsufficientSamples, InvalidWeb, NotEnoughExtremePoints, NotInterior,
                     PoleInsideDomain, SampleOutsideDomain)
from .geom_core import (HomPoint, ProjLine, ProjMap, as_hom, collinearity_defect,
                        fit_projective)
from .hilbert_metric import distances

# fan positions (k + FAN_PHASE) / n avoid hitting symmetric directions exactly
FAN_PHASE = 0.3819660112501051

TOL_ISOMETRY = 1e-7
TOL_RESIDUAL = 1e-7
TOL_COLLINEAR = 1e-7


class Verdict(enum.Enum):
    PROJECTIVE_ISOMETRY = "ProjectiveIsometry"
    NON_PROJECTIVE_ISOMETRY = "NonProjectiveIsometry"
    NOT_ISOMETRY = "NotIsometry"


@dataclass(frozen=True)
class ClassifyConfig:
    seed: int = 0
    pairs: int = 500
    lines_per_pole: int = 8
    samples_per_line: int = 7
    tol_isometry: float = TOL_ISOMETRY
    tol_residual: float = TOL_RESIDUAL
    tol_collinear: float = TOL_COLLINEAR


# ---------------------------------------------------------------------------
# pencils and webs

def _rotate(v, phi):
    c, s = math.cos(phi), math.sin(phi)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])


def pencil_lines(pole, domain, n):
    """``n`` chords of ``domain`` on lines through ``pole``.

    For a finite pole the lines fan across the angle under which the domain is
    seen; each chord's ``xbar`` is its endpoint nearer the pole. For a pole at
    infinity the chords are parallel.
    """
    if n < 2:
        raise ValueError("a pencil needs at least 2 lines")
    pole = as_hom(pole)
    outline = domain.outline(1024)
    chords = []
    if pole.is_at_infinity:
        d = pole.normalized()[:2]
        d = d / np.hypot(*d)
        nrm = np.array([-d[1], d[0]])
        s = outline @ nrm
        lo, hi = s.min(), s.max()
        for k in range(n):
            off = lo + (k + FAN_PHASE) / n * (hi - lo)
            seg = domain.line_chord(off * nrm, d)
            if seg is None:
                raise HilbertError("pencil line misses the domain")
            chords.append(Chord(*seg))
        return chords

    A = pole.affine()
    if domain.contains(A) is Location.INTERIOR:
        raise PoleInsideDomain("pencil pole must not be interior")
    ref = domain.center - A
    ref = ref / np.hypot(*ref)
    rel = outline - A
    keep = np.hypot(rel[:, 0], rel[:, 1]) > 1e3 * domain.tol
    rel = rel[keep]
    ang = np.arctan2(ref[0] * rel[:, 1] - ref[1] * rel[:, 0], rel @ ref)
    lo, hi = ang.min(), ang.max()
    for k in range(n):
        phi = lo + (k + FAN_PHASE) / n * (hi - lo)
        seg = domain.line_chord(A, _rotate(ref, phi))
        if seg is None:
            raise HilbertError("pencil line misses the domain")
        p0, p1 = seg
        if np.hypot(*(p1 - A)) < np.hypot(*(p0 - A)):
            p0, p1 = p1, p0
        chords.append(Chord(p0, p1))
    return chords


@dataclass(frozen=True, eq=False)
class Pencil:
    pole: HomPoint
    domain: ConvexDomain
    n_lines: int

    def __post_init__(self):
        object.__setattr__(self, "pole", as_hom(self.pole))
        object.__setattr__(self, "_lines", pencil_lines(self.pole, self.domain, self.n_lines))

    def lines(self):
        return list(self._lines)


@dataclass(frozen=True, eq=False)
class Web:
    families: tuple

    def __post_init__(self):
        fams = tuple(self.families)
        if len(fams) < 2:
            raise InvalidWeb("a web needs at least two families")
        if any(f.domain is not fams[0].domain for f in fams):
            raise InvalidWeb("web families must share a domain")
        for i in range(len(fams)):
            for j in range(i + 1, len(fams)):
                a, b = fams[i].pole, fams[j].pole
                if a == b:
                    raise InvalidWeb("web poles must be pairwise distinct")
                common = ProjLine.through(a, b)
                for fam in (fams[i], fams[j]):
                    for ch in fam.lines():
                        if common.contains(ch.xbar, 1e-12) and common.contains(ch.ybar, 1e-12):
                            raise InvalidWeb("two families share a line")
        object.__setattr__(self, "families", fams)

    @property
    def n(self):
        return len(self.families)


def chord_samples(chord, m):
    """``m`` points strictly inside a chord at fractions (k + 1) / (m + 1)."""
    s = (np.arange(m) + 1.0) / (m + 1.0)
    return chord.xbar + s[:, None] * (chord.ybar - chord.xbar)


def _pencil_sample_sets(pencils, samples_per_line):
    return [chord_samples(ch, samples_per_line) for p in pencils for ch in p.lines()]


def evaluate_map(f, P):
    P = np.asarray(P, dtype=np.float64).reshape(-1, 2)
    if isinstance(f, SampledMap):
        return f.evaluate(P)
    if isinstance(f, ProjMap):
        return f.apply_affine(P)
    return np.asarray(f(P), dtype=np.float64).reshape(-1, 2)


def _straightness(pencils, f, samples_per_line, domain):
    sets = _pencil_sample_sets(pencils, samples_per_line)
    if not sets:
        return 0.0
    allpts = np.concatenate(sets)
    if not np.all(domain.is_interior(allpts)):
        raise SampleOutsideDomain("line sample is not interior to the source domain")
    images = evaluate_map(f, allpts)
    m = samples_per_line
    return max(collinearity_defect(images[k * m:(k + 1) * m]) for k in range(len(sets)))


def web_image_check(web, f, samples_per_line=7):
    """Largest collinearity defect of the image of any sampled web line."""
    if samples_per_line < 3:
        raise ValueError("need at least 3 samples per line")
    return _straightness(web.families, f, samples_per_line, web.families[0].domain)


# ---------------------------------------------------------------------------
# pole selection per shape class

def five_poles(domain):
    shape = domain.classify_shape()
    if shape is ShapeClass.STRICTLY_CONVEX:
        return domain.boundary_point(2 * np.pi * np.arange(5) / 5)
    if shape is ShapeClass.POLYGON_5PLUS:
        E = domain.extreme_points()
        idx = (np.arange(5) * len(E)) // 5
        return E[idx]
    raise NotEnoughExtremePoints(f"{shape.value} has fewer than five extreme points")


def _triangle_web_poles(tri):
    V = tri.extreme_points()
    c = tri.center
    # an exterior pole in general position: no line through it and a vertex
    # is an edge line or a median
    for phi in (0.7, 1.9, 3.1, 4.3, 5.5):
        P = c + 3.0 * tri.diameter * np.array([math.cos(phi), math.sin(phi)])
        ok = True
        for v in list(V) + [c]:
            for w in V:
                if v is w or np.array_equal(v, w):
                    continue
                if ProjLine.through(v, w).incidence(P) < 1e-3:
                    ok = False
        if ok:
            return np.vstack([V, P])
    raise DegenerateConfiguration("no generic exterior pole found")


def collineation_poles(domain):
    """Poles whose pencils must map to lines under any isometry (plus one
    extra generic pole for triangles, where three vertex pencils are not
    enough)."""
    shape = domain.classify_shape()
    if shape is ShapeClass.TRIANGLE:
        return _triangle_web_poles(domain)
    if shape is ShapeClass.QUADRILATERAL:
        return domain.extreme_points()
    return five_poles(domain)


def five_pole_check(domain, f, lines_per_pole=8, samples_per_line=7):
    """Straightness of f on five pencils through extreme points.

    Returns ``(defect, poles)``; a near-zero defect forces f to be projective.
    """
    poles = five_poles(domain)
    pencils = [Pencil(HomPoint.from_affine(p), domain, lines_per_pole) for p in poles]
    Web(tuple(pencils))
    defect = _straightness(pencils, f, samples_per_line, domain)
    return defect, [HomPoint.from_affine(p) for p in poles]


# ---------------------------------------------------------------------------
# quadrilaterals

@dataclass(frozen=True)
class QuadPatchReport:
    residuals: tuple
    glue_defect: float
    maps: tuple
    center: np.ndarray


def _diagonal_meet(quad):
    if quad.classify_shape() is not ShapeClass.QUADRILATERAL:
        raise DegenerateQuadrilateral("domain does not have exactly four extreme points")
    A, B, C, D = quad.extreme_points()
    M = np.column_stack([C - A, B - D])
    try:
        s, u = np.linalg.solve(M, B - A)
    except np.linalg.LinAlgError as exc:
        raise DegenerateQuadrilateral("diagonals are parallel") from exc
    if not (0 < s < 1 and 0 < u < 1):
        raise DegenerateQuadrilateral("diagonals do not meet inside")
    return (A, B, C, D), A + s * (C - A)


def _patch_points(P, Q, R, n=16):
    """Deterministic low-discrepancy points strictly inside triangle PQR."""
    k = np.arange(1, n + 1)
    g = 1.32471795724474602596  # plastic number, R2 sequence
    u = np.mod(0.5 + k / g, 1.0)
    v = np.mod(0.5 + k / (g * g), 1.0)
    flip = u + v > 1
    u[flip], v[flip] = 1 - u[flip], 1 - v[flip]
    pts = P + u[:, None] * (Q - P) + v[:, None] * (R - P)
    c = (P + Q + R) / 3
    return c + 0.9 * (pts - c)


def quad_patches(quad):
    (A, B, C, D), M = _diagonal_meet(quad)
    tris = [(A, B, M), (B, C, M), (C, D, M), (D, A, M)]
    return tris, M


def quad_probe_points(quad):
    tris, _ = quad_patches(quad)
    return np.concatenate([_patch_points(*t) for t in tris])


def quadrilateral_patch_check(quad, f, glue_samples=9):
    """Fit a projective map on each of the four diagonal triangles and
    measure how well adjacent fits agree on their shared edge."""
    tris, M = quad_patches(quad)
    maps, residuals = [], []
    for t in tris:
        src = _patch_points(*t)
        pm, res = fit_projective((src, evaluate_map(f, src)))
        maps.append(pm)
        residuals.append(res)
    glue = 0.0
    s = (np.arange(glue_samples) + 1.0) / (glue_samples + 1.0)
    for i in range(4):
        V = tris[i][1]  # shared edge V -> M between patch i and i + 1
        edge = V + s[:, None] * (M - V)
        a = maps[i].apply_affine(edge)
        b = maps[(i + 1) % 4].apply_affine(edge)
        glue = max(glue, float(np.max(np.hypot(*(a - b).T))))
    return QuadPatchReport(tuple(residuals), glue, tuple(maps), M)


# ---------------------------------------------------------------------------
# sampled maps

@dataclass(frozen=True, eq=False)
class SampledMap:
    """A candidate map Omega_1 -> Omega_2 given by samples and/or a callable.

    Table-only maps answer :meth:`evaluate` by exact lookup of the source
    point, so they must contain every point the checks will query (see
    :func:`probe_points`).
    """

    sources: np.ndarray
    targets: np.ndarray
    source_domain: ConvexDomain
    target_domain: ConvexDomain
    func: object = None
    probe_config: dict = field(default=None)

    def __post_init__(self):
        S = np.array(self.sources, dtype=np.float64).reshape(-1, 2)
        T = np.array(self.targets, dtype=np.float64).reshape(-1, 2)
        if S.shape != T.shape:
            raise ValueError("sources and targets differ in length")
        if len(S) and not np.all(self.source_domain.is_interior(S)):
            raise NotInterior("sample source not interior to the source domain")
        if len(T) and not np.all(self.target_domain.is_interior(T)):
            raise NotInterior("sample target not interior to the target domain")
        tol = 1e-12 * self.target_domain.diameter
        for i, j in cKDTree(T).query_pairs(tol) if len(T) > 1 else ():
            if np.hypot(*(S[i] - S[j])) > 1e-12 * self.source_domain.diameter:
                raise ValueError("sampled map is not injective")
        for a in (S, T):
            a.setflags(write=False)
        object.__setattr__(self, "sources", S)
        object.__setattr__(self, "targets", T)
        object.__setattr__(self, "_index", None)

    def __len__(self):
        return len(self.sources)

    @classmethod
    def from_function(cls, func, source_domain, target_domain, n=500, seed=0,
                      extra_points=None, max_gauge=0.99, probe_config=None):
        rng = np.random.default_rng(seed)
        S = source_domain.sample_interior(rng, n, max_gauge=max_gauge)
        if extra_points is not None and len(extra_points):
            S = np.vstack([S, extra_points])
        T = evaluate_map(func, S)
        return cls(S, T, source_domain, target_domain, func, probe_config)

    def evaluate(self, P):
        P = np.asarray(P, dtype=np.float64).reshape(-1, 2)
        if self.func is not None:
            return evaluate_map(self.func, P)
        if self._index is None:
            table = {(float(x), float(y)): i for i, (x, y) in enumerate(self.sources)}
            object.__setattr__(self, "_index", (table, cKDTree(self.sources)))
        table, tree = self._index
        out = np.empty_like(P)
        tol = 1e-12 * self.source_domain.diameter
        for k, (x, y) in enumerate(P):
            i = table.get((float(x), float(y)))
            if i is None:
                dist, i = tree.query((x, y))
                if dist > tol:
                    raise InsufficientSamples(f"map table has no sample at ({x:.17g}, {y:.17g})")
            out[k] = self.targets[i]
        return out

    def reordered(self, perm):
        perm = np.asarray(perm)
        return SampledMap(self.sources[perm], self.targets[perm], self.source_domain,
                          self.target_domain, self.func, self.probe_config)

    def to_json(self):
        out = {
            "samples": [[[float(s[0]), float(s[1])], [float(t[0]), float(t[1])]]
                        for s, t in zip(self.sources, self.targets)],
            "source": domain_to_json(self.source_domain),
            "target": domain_to_json(self.target_domain),
        }
        if self.probe_config:
            out["probe_config"] = dict(self.probe_config)
        return out

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            samples = np.asarray(obj["samples"], dtype=np.float64)
            src = domain_from_json(obj["source"])
            tgt = domain_from_json(obj["target"])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, HilbertError):
                raise
            raise ValueError(f"malformed sampled map: {exc}") from exc
        if samples.size == 0:
            samples = samples.reshape(0, 2, 2)
        if samples.ndim != 3 or samples.shape[1:] != (2, 2):
            raise ValueError("samples must be a list of [[sx, sy], [tx, ty]]")
        return cls(samples[:, 0], samples[:, 1], src, tgt, None, obj.get("probe_config"))


def probe_points(domain, lines_per_pole=8, samples_per_line=7):
    """Every source point :func:`classify_map` evaluates the map at."""
    poles = collineation_poles(domain)
    pencils = [Pencil(HomPoint.from_affine(p), domain, lines_per_pole) for p in poles]
    sets = _pencil_sample_sets(pencils, samples_per_line)
    if domain.classify_shape() is ShapeClass.QUADRILATERAL:
        sets.append(quad_probe_points(domain))
    return np.concatenate(sets)


# ---------------------------------------------------------------------------
# classification

@dataclass(frozen=True)
class ClassificationReport:
    verdict: Verdict
    isometry_defect: float
    collineation_defect: float
    residual: float
    fitted_map: ProjMap = None
    shape: ShapeClass = None
    details: dict = field(default_factory=dict)

    def to_json(self):
        def num(v):
            return float(v) if np.isfinite(v) else None

        return {
            "verdict": self.verdict.value,
            "shape": self.shape.value if self.shape else None,
            "isometry_defect": num(self.isometry_defect),
            "collineation_defect": num(self.collineation_defect),
            "residual": num(self.residual),
            "fitted_map": self.fitted_map.to_json() if self.fitted_map is not None else None,
            "details": {k: num(v) if isinstance(v, float) else v for k, v in self.details.items()},
        }


def isometry_defect(smap, pairs, seed):
    """Max |d2(f x, f y) - d1(x, y)| over ``pairs`` seeded random sample pairs."""
    n = len(smap)
    rng = np.random.default_rng(seed)
    i = rng.integers(n, size=pairs)
    j = rng.integers(n - 1, size=pairs)
    j = j + (j >= i)
    d1 = distances(smap.source_domain, smap.sources[i], smap.sources[j])
    d2 = distances(smap.target_domain, smap.targets[i], smap.targets[j])
    return float(np.max(np.abs(d2 - d1))) if pairs else 0.0


def classify_map(smap, pair_budget=None, config=None):
    """Sort a sampled map into projective isometry / non-projective isometry /
    not an isometry."""
    cfg = config or ClassifyConfig()
    pairs = cfg.pairs if pair_budget is None else pair_budget
    need = max(pairs, 20)
    if len(smap) < need:
        if smap.func is None:
            raise InsufficientSamples(f"need at least {need} samples, got {len(smap)}")
        smap = SampledMap.from_function(smap.func, smap.source_domain, smap.target_domain,
                                        n=need, seed=cfg.seed)
    dom = smap.source_domain
    shape = dom.classify_shape()

    iso = isometry_defect(smap, pairs, cfg.seed)

    poles = collineation_poles(dom)
    pencils = [Pencil(HomPoint.from_affine(p), dom, cfg.lines_per_pole) for p in poles]
    colline = _straightness(pencils, smap, cfg.samples_per_line, dom)

    details = {}
    extra_ok = True
    if shape is ShapeClass.QUADRILATERAL:
        q = quadrilateral_patch_check(dom, smap)
        details["patch_residual"] = float(max(q.residuals))
        details["glue_defect"] = float(q.glue_defect)
        extra_ok = max(q.residuals) < cfg.tol_residual and q.glue_defect < cfg.tol_residual

    try:
        fitted, residual = fit_projective((smap.sources, smap.targets))
    except DegenerateConfiguration:
        fitted, residual = None, math.inf

    if iso >= cfg.tol_isometry:
        verdict = Verdict.NOT_ISOMETRY
    elif residual < cfg.tol_residual and colline < cfg.tol_collinear and extra_ok:
        verdict = Verdict.PROJECTIVE_ISOMETRY
    else:
        verdict = Verdict.NON_PROJECTIVE_ISOMETRY
    return ClassificationReport(verdict, iso, colline, residual, fitted, shape, details)
