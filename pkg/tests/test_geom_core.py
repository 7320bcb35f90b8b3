import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbert2d.errors import DegenerateConfiguration, NonCollinear, PointAtInfinity
from hilbert2d.geom_core import (HomPoint, ProjLine, ProjMap, apply, collinearity_defect,
                                 cross_ratio, fit_projective, relative_matrix_error,
                                 transfer_errors)
from hilbert2d.simplex_special import reciprocal_triangle_map
from hilbert2d.convex_domain import Polygon

from oracles import random_projective, tls_defect_bruteforce, transfer_error_bruteforce


# -- HomPoint / ProjLine -----------------------------------------------------

def test_hompoint_equality_up_to_scale():
    assert HomPoint((1, 2, 3)) == HomPoint((2, 4, 6))
    assert HomPoint((1, 0, 0)) == HomPoint((-1, 0, 0))
    assert HomPoint((1, 2, 3)) != HomPoint((1, 2.1, 3))


def test_hompoint_normalization_largest_coordinate():
    np.testing.assert_allclose(HomPoint((2, -8, 4)).normalized(), [-0.25, 1, -0.5])


def test_hompoint_rejects_zero():
    with pytest.raises(ValueError):
        HomPoint((0, 0, 0))


def test_point_at_infinity_has_no_affine_image():
    with pytest.raises(PointAtInfinity):
        HomPoint((1, 2, 0)).affine()


def test_line_incidence_is_scale_invariant():
    line = ProjLine.through((0, 0), (1, 1))
    assert line.contains(HomPoint((3, 3, 1)))
    assert line.contains(HomPoint((-6, -6, -2)))
    assert not line.contains((1, 0))
    assert line.meet(ProjLine.through((0, 1), (1, 0))) == HomPoint((0.5, 0.5, 1))


# -- cross_ratio ---------------------------------------------------------------

@pytest.mark.parametrize("x, y, xbar, ybar, expected", [
    ((0, 0), (0, 0), (-1, 0), (1, 0), 1.0),
    ((0, 0), (0.5, 0), (-1, 0), (1, 0), 3.0),
    ((0, 0), (2, 0), (-1, 0), (3, 0), 9.0),
])
def test_cross_ratio_examples(x, y, xbar, ybar, expected):
    assert cross_ratio(x, y, xbar, ybar) == pytest.approx(expected, abs=1e-15)


def test_cross_ratio_accepts_homogeneous_points():
    cr = cross_ratio(HomPoint((0, 0, 2)), HomPoint((1, 0, 2)), (-1, 0), (1, 0))
    assert cr == pytest.approx(3.0)


def test_cross_ratio_rejects_non_collinear():
    with pytest.raises(NonCollinear):
        cross_ratio((0, 0), (0.5, 0.1), (-1, 0), (1, 0))


def test_cross_ratio_rejects_point_on_chord_end():
    with pytest.raises(DegenerateConfiguration):
        cross_ratio((0, 0), (1, 0), (-1, 0), (1, 0))


def _line_config(draw_t, base, direction):
    return [np.asarray(base) + t * np.asarray(direction) for t in draw_t]


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=4, max_size=4, unique=True),
       st.floats(0, 2 * math.pi), st.integers(0, 2 ** 32 - 1))
def test_cross_ratio_projective_invariance(ts, angle, seed):
    ts = sorted(ts)
    if min(np.diff(ts)) < 1e-2:
        return
    tx, ty = ts[1], ts[2]
    base, d = np.array([0.2, -0.1]), np.array([math.cos(angle), math.sin(angle)])
    xbar, x, y, ybar = _line_config([ts[0], tx, ty, ts[3]], base, d)
    M = ProjMap(random_projective(np.random.default_rng(seed)))
    H = M.matrix @ np.column_stack([np.array([xbar, x, y, ybar]), np.ones(4)]).T
    if np.min(np.abs(H[2])) < 0.2 or not (np.all(H[2] > 0) or np.all(H[2] < 0)):
        return
    imgs = M.apply_affine(np.array([xbar, x, y, ybar]))
    before = cross_ratio(x, y, xbar, ybar)
    after = cross_ratio(imgs[1], imgs[2], imgs[0], imgs[3])
    assert abs(before - after) < 1e-9 * max(1.0, before)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=5, max_size=5, unique=True))
def test_cross_ratio_multiplicative(ts):
    ts = sorted(ts)
    if min(np.diff(ts)) < 1e-3:
        return
    d = np.array([0.6, 0.8])
    xbar, x, z, y, ybar = (t * d for t in ts)
    lhs = cross_ratio(x, y, xbar, ybar)
    rhs = cross_ratio(x, z, xbar, ybar) * cross_ratio(z, y, xbar, ybar)
    assert abs(lhs - rhs) < 1e-9 * lhs


# -- apply -----------------------------------------------------------------------

def test_apply_identity():
    assert apply(ProjMap.identity(), HomPoint((2, 3, 1))) == HomPoint((2, 3, 1))


def test_apply_scaling():
    assert apply(ProjMap(np.diag([2.0, 2.0, 1.0])), HomPoint((1, 1, 1))) == HomPoint((2, 2, 1))


def test_apply_projective_affine_image():
    M = ProjMap([[1, 0, 0], [0, 1, 0], [1, 0, 1]])
    img = apply(M, HomPoint((1, 0, 1)))
    assert img == HomPoint((1, 0, 2))
    np.testing.assert_allclose(img.affine(), [0.5, 0.0], atol=1e-15)


def test_apply_affine_point_at_infinity():
    M = ProjMap([[1, 0, 0], [0, 1, 0], [1, 0, 1]])
    with pytest.raises(PointAtInfinity):
        M.apply_affine([-1.0, 0.0])


def test_singular_map_rejected():
    with pytest.raises(DegenerateConfiguration):
        ProjMap(np.ones((3, 3)))


# -- fit_projective ------------------------------------------------------------------

def test_fit_identity_from_four_points():
    src = [(0, 0), (1, 0), (1, 1), (0, 1)]
    pm, res = fit_projective([(p, p) for p in src])
    assert relative_matrix_error(pm.matrix, np.eye(3)) < 1e-12
    assert res < 1e-12


def test_fit_recovers_seeded_map(rng):
    M = random_projective(rng)
    src = rng.uniform(-1, 1, (10, 2))
    dst = ProjMap(M).apply_affine(src)
    pm, res = fit_projective([(s, t) for s, t in zip(src, dst)])
    assert relative_matrix_error(pm.matrix, M) < 1e-6
    assert res < 1e-9


def test_fit_reciprocal_map_has_large_residual(rng):
    tri = Polygon([(0, 0), (1, 0), (0, 1)])
    src = tri.sample_interior(rng, 10, max_gauge=0.9)
    dst = reciprocal_triangle_map(tri)(src)
    pm, res = fit_projective((src, dst))
    assert res == pytest.approx(transfer_error_bruteforce(pm.matrix, src, dst), rel=1e-9)
    assert res > 1e-2


def test_fit_reproduces_correspondences_within_residual(rng):
    src = rng.uniform(-1, 1, (30, 2))
    dst = src + 1e-3 * rng.standard_normal(src.shape)
    pm, res = fit_projective((src, dst))
    assert np.all(transfer_errors(pm, src, dst) <= res)
    assert np.max(np.hypot(*(pm.apply_affine(src) - dst).T)) <= res


def test_fit_rejects_collinear_start():
    src = [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1)]
    with pytest.raises(DegenerateConfiguration):
        fit_projective([(p, p) for p in src])


def test_fit_rejects_too_few_points():
    src = np.array([(0, 0), (1, 0), (0, 1)], float)
    with pytest.raises(DegenerateConfiguration):
        fit_projective((src, src))


# -- collinearity_defect ------------------------------------------------------------

def test_collinearity_exact_line():
    assert collinearity_defect(np.array([(0, 0), (1, 0), (2, 0)], float)) == pytest.approx(0, abs=1e-16)


def test_collinearity_triangle_matches_bruteforce():
    pts = np.array([(0, 0), (1, 0), (1, 1)], float)
    expected = tls_defect_bruteforce(pts)
    assert expected == pytest.approx(0.47140452, abs=1e-8)
    assert collinearity_defect(pts) == pytest.approx(expected, abs=1e-9)


def test_collinearity_small_perturbation():
    pts = np.array([(0, 0), (2, 2), (1, 1 + 1e-9)])
    assert collinearity_defect(pts) <= 1e-9


def test_collinearity_degenerate_inputs():
    assert collinearity_defect(np.array([[1.0, 2.0]])) == 0.0
    assert collinearity_defect(np.array([[1.0, 2.0]] * 4)) == 0.0
    assert collinearity_defect([HomPoint((0, 0, 1)), (1, 1), HomPoint((4, 4, 2))]) < 1e-15


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1)), min_size=3, max_size=12),
       st.floats(0, 2 * math.pi), st.floats(-5, 5), st.floats(-5, 5))
def test_collinearity_rigid_motion_invariance(pts, angle, tx, ty):
    P = np.array(pts)
    R = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
    Q = P @ R.T + [tx, ty]
    assert abs(collinearity_defect(P) - collinearity_defect(Q)) < 1e-12
