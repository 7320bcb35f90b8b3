import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbert2d.catalogue import default_catalogue
from hilbert2d.convex_domain import Ellipse, Polygon, SuperEllipse, regular_polygon
from hilbert2d.errors import CoincidentPoints, NotInterior
from hilbert2d.geom_core import ProjMap
from hilbert2d.hilbert_metric import (GeodesicReport, distance, distances, metric_ball,
                                      segment_additivity, unique_geodesic_probe)
from hilbert2d.simplex_special import hex_coords, hex_norm_array

from oracles import ellipse_distance, polygon_distance, random_projective, simplex_distance

CATALOGUE = dict(default_catalogue())


def _sample(dom, seed, n, max_gauge=0.98):
    return dom.sample_interior(np.random.default_rng(seed), n, max_gauge=max_gauge)


# -- distance examples ---------------------------------------------------------------

def test_distance_zero_for_equal_points(disk):
    assert distance(disk, (0, 0), (0, 0)) == 0.0


def test_distance_disk_ln3(disk):
    assert distance(disk, (0, 0), (0.5, 0)) == pytest.approx(math.log(3), abs=1e-14)


def test_distance_triangle_ln2(triangle):
    x, y = (1 / 3, 1 / 3), (0.5, 0.25)
    expected = polygon_distance(triangle.vertices, x, y)
    assert expected == pytest.approx(math.log(2), abs=1e-12)
    # barycentric coordinates of y are (1/4, 1/2, 1/4)
    assert simplex_distance([1 / 3] * 3, [0.25, 0.5, 0.25]) == pytest.approx(math.log(2), abs=1e-15)
    assert distance(triangle, x, y) == pytest.approx(expected, abs=1e-12)


def test_distance_not_interior(disk):
    with pytest.raises(NotInterior):
        distance(disk, (0, 0), (1.0, 0))
    with pytest.raises(NotInterior):
        distance(disk, (2.0, 0), (0, 0))


def test_distances_against_oracles(rng):
    pent = CATALOGUE["pentagon"]
    P = pent.sample_interior(rng, 200)
    got = distances(pent, P[:100], P[100:])
    ref = [polygon_distance(pent.vertices, x, y) for x, y in zip(P[:100], P[100:])]
    np.testing.assert_allclose(got, ref, rtol=1e-10, atol=1e-12)

    ell = CATALOGUE["ellipse"]
    P = ell.sample_interior(rng, 200)
    got = distances(ell, P[:100], P[100:])
    ref = [ellipse_distance((0.1, -0.2), 1.3, 0.8, 0.4, x, y) for x, y in zip(P[:100], P[100:])]
    np.testing.assert_allclose(got, ref, rtol=1e-10, atol=1e-12)


# -- metric axioms ---------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(CATALOGUE)), st.integers(0, 2 ** 31 - 1))
def test_symmetry(name, seed):
    dom = CATALOGUE[name]
    P = _sample(dom, seed, 40)
    d1 = distances(dom, P[:20], P[20:])
    d2 = distances(dom, P[20:], P[:20])
    assert np.max(np.abs(d1 - d2)) < 1e-10


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(CATALOGUE)), st.integers(0, 2 ** 31 - 1))
def test_triangle_inequality(name, seed):
    dom = CATALOGUE[name]
    P = _sample(dom, seed, 60)
    X, Y, Z = P[:20], P[20:40], P[40:]
    assert np.all(distances(dom, X, Y) <= distances(dom, X, Z) + distances(dom, Z, Y) + 1e-10)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["pentagon", "hexagon", "square", "triangle"]), st.integers(0, 2 ** 31 - 1))
def test_projective_invariance_polygons(name, seed):
    dom = CATALOGUE[name]
    rng = np.random.default_rng(seed)
    T = ProjMap(random_projective(rng, 0.2))
    H = dom.vertices @ T.matrix[:, :2].T + T.matrix[:, 2]
    if np.min(np.abs(H[:, 2])) < 0.3 or not (np.all(H[:, 2] > 0) or np.all(H[:, 2] < 0)):
        return
    img = dom.transformed(T)
    P = _sample(dom, seed, 40, 0.95)
    d1 = distances(dom, P[:20], P[20:])
    d2 = distances(img, T.apply_affine(P[:20]), T.apply_affine(P[20:]))
    assert np.max(np.abs(d1 - d2)) < 1e-8


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["ellipse", "superellipse-1.5", "superellipse-2", "superellipse-4"]),
       st.integers(0, 2 ** 31 - 1))
def test_affine_invariance_smooth(name, seed):
    dom = CATALOGUE[name]
    rng = np.random.default_rng(seed)
    m = np.eye(3)
    m[:2, :2] = rng.uniform(-0.5, 0.5, (2, 2)) + np.eye(2)
    m[:2, 2] = rng.uniform(-1, 1, 2)
    if np.linalg.cond(m[:2, :2]) > 10:
        return
    T = ProjMap(m)
    img = dom.transformed(T)
    P = _sample(dom, seed, 40, 0.95)
    d1 = distances(dom, P[:20], P[20:])
    d2 = distances(img, T.apply_affine(P[:20]), T.apply_affine(P[20:]))
    assert np.max(np.abs(d1 - d2)) < 1e-8


def test_projective_invariance_disk_automorphism(disk, rng):
    eta = 0.6
    B = ProjMap([[math.cosh(eta), 0, math.sinh(eta)], [0, 1, 0], [math.sinh(eta), 0, math.cosh(eta)]])
    img = disk.transformed(B)
    assert img.semi_axes == pytest.approx((1.0, 1.0), abs=1e-12)
    P = disk.sample_interior(rng, 100, max_gauge=0.9)
    d1 = distances(disk, P[:50], P[50:])
    d2 = distances(disk, B.apply_affine(P[:50]), B.apply_affine(P[50:]))
    assert np.max(np.abs(d1 - d2)) < 1e-8


def test_domain_monotonicity(rng):
    inner = regular_polygon(6, 0.9)
    outer = Ellipse((0, 0), (1, 1))
    P = inner.sample_interior(rng, 200)
    assert np.all(distances(outer, P[:100], P[100:]) <= distances(inner, P[:100], P[100:]) + 1e-10)
    sq = Polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])
    P = outer.sample_interior(rng, 200)
    assert np.all(distances(sq, P[:100], P[100:]) <= distances(outer, P[:100], P[100:]) + 1e-10)


@pytest.mark.parametrize("name", sorted(CATALOGUE))
def test_boundary_blow_up(name):
    dom = CATALOGUE[name]
    x = dom.center
    u = np.array([math.cos(0.7), math.sin(0.7)])
    _, hi = dom.chord_params(x[None], u[None])
    s = 1 - np.logspace(-1, -8, 30)
    Y = x + (hi[0] * s)[:, None] * u
    d = distances(dom, np.broadcast_to(x, Y.shape), Y)
    assert np.all(np.diff(d) > 0)
    assert d[-1] > 15


# -- additivity --------------------------------------------------------------------------

def test_additivity_examples(disk, square):
    assert segment_additivity(disk, (0.1, 0.2), (0.1, 0.2), (0.3, -0.4)) == pytest.approx(0, abs=1e-15)
    assert segment_additivity(disk, (-0.5, 0), (0, 0), (0.5, 0)) == pytest.approx(0, abs=1e-12)
    x, z, y = (0.2, 0.5), (0.5, 0.8), (0.8, 0.5)
    ref = (polygon_distance(square.vertices, x, z) + polygon_distance(square.vertices, z, y)
           - polygon_distance(square.vertices, x, y))
    got = segment_additivity(square, x, z, y)
    assert got >= 0
    assert got == pytest.approx(ref, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(CATALOGUE)), st.integers(0, 2 ** 31 - 1), st.floats(0, 1))
def test_additivity_on_segment(name, seed, s):
    dom = CATALOGUE[name]
    x, y = _sample(dom, seed, 2)
    z = x + s * (y - x)
    assert abs(segment_additivity(dom, x, z, y)) < 1e-9


# -- geodesic probe -----------------------------------------------------------------------

def test_probe_disk_unique(disk):
    rep = unique_geodesic_probe(disk, (-0.3, 0), (0.3, 0), 200)
    assert rep.additivity_defect > 0
    assert not rep.nonunique


def test_probe_square_nonunique(square):
    rep = unique_geodesic_probe(square, (0.25, 0.5), (0.75, 0.5), 200)
    assert rep.additivity_defect < 1e-9
    assert rep.nonunique
    w = rep.witness
    assert abs(w[1] - 0.5) > 1e-3 or not (0.25 <= w[0] <= 0.75)


def test_probe_triangle_line_through_vertex(triangle):
    rep = unique_geodesic_probe(triangle, (0.1, 0.1), (0.3, 0.3), 200)
    assert rep.additivity_defect > 1e-9
    assert not rep.nonunique


def test_probe_errors(disk):
    with pytest.raises(CoincidentPoints):
        unique_geodesic_probe(disk, (0.1, 0), (0.1, 0))
    with pytest.raises(NotInterior):
        unique_geodesic_probe(disk, (0.1, 0), (1.1, 0))


def test_geodesic_report_json():
    rep = GeodesicReport(0.5, np.array([0.1, 0.2]))
    assert rep.to_json() == {"additivity_defect": 0.5, "witness": [0.1, 0.2], "nonunique": False}


# -- metric balls ---------------------------------------------------------------------------

def test_ball_disk_ln3(disk):
    P = metric_ball(disk, (0, 0), math.log(3), 64)
    assert P.shape == (64, 2)
    assert np.max(np.abs(np.hypot(*P.T) - 0.5)) < 1e-8


def test_ball_collapses_at_zero_radius(disk):
    P = metric_ball(disk, (0.2, 0.1), 0.0, 32)
    assert np.max(np.hypot(*(P - [0.2, 0.1]).T)) < 1e-9


def test_ball_triangle_matches_hex_ball(triangle):
    c = np.array([1 / 3, 1 / 3])
    P = metric_ball(triangle, c, 1.0, 96)
    V = hex_coords(triangle, P) - hex_coords(triangle, c[None])
    assert np.max(np.abs(hex_norm_array(V) - 1.0)) < 1e-6


@pytest.mark.parametrize("name", sorted(CATALOGUE))
def test_ball_points_at_requested_radius(name):
    dom = CATALOGUE[name]
    P = metric_ball(dom, dom.center, 0.8, 32)
    d = distances(dom, np.broadcast_to(dom.center, P.shape), P)
    assert np.max(np.abs(d - 0.8)) < 1e-9


def test_ball_rejects_bad_input(disk):
    with pytest.raises(ValueError):
        metric_ball(disk, (0, 0), 1.0, 4)
    with pytest.raises(NotInterior):
        metric_ball(disk, (1, 0), 1.0)


def test_superellipse_distance_consistency(rng):
    # p = 2 superellipse and the ellipse path agree
    se = SuperEllipse((0.1, -0.2), (1.3, 0.8), 2.0, 0.4)
    ell = Ellipse((0.1, -0.2), (1.3, 0.8), 0.4)
    P = ell.sample_interior(rng, 100)
    np.testing.assert_allclose(distances(se, P[:50], P[50:]), distances(ell, P[:50], P[50:]), rtol=1e-12)
