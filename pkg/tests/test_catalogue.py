import numpy as np
import pytest

from hilbert2d.catalogue import (MAP_FAMILIES, default_catalogue, families_for, make_sampled_map,
                                 map_family, radial_perturbation, random_projective_map,
                                 verify_theorem)
from hilbert2d.convex_domain import Polygon, ShapeClass
from hilbert2d.errors import InvalidDomain
from hilbert2d.hilbert_metric import distances
from hilbert2d.webs_isometry import ClassifyConfig, Verdict, classify_map


def test_catalogue_covers_every_shape_class():
    shapes = {d.classify_shape() for _, d in default_catalogue()}
    assert shapes == set(ShapeClass)
    names = [n for n, _ in default_catalogue()]
    assert len(names) == len(set(names)) == 8


def test_random_projective_maps_are_isometries(catalogue_domain, rng):
    dom = catalogue_domain
    T = random_projective_map(dom, rng)
    img = dom.transformed(T)
    P = dom.sample_interior(rng, 200, max_gauge=0.99)
    Q = T.apply_affine(P)
    assert np.all(img.is_interior(Q))
    d1 = distances(dom, P[:100], P[100:])
    d2 = distances(img, Q[:100], Q[100:])
    assert np.max(np.abs(d1 - d2)) < 1e-9


def test_radial_perturbation_is_self_map(catalogue_domain, rng):
    dom = catalogue_domain
    g = radial_perturbation(dom, 1e-2)
    P = dom.sample_interior(rng, 500)
    Q = g(P)
    assert np.all(dom.is_interior(Q))
    # gauge is increased (moved outwards) but never past the boundary
    assert np.all(dom.gauge(Q) >= dom.gauge(P) - 1e-15)


def test_map_family_rejections(square):
    with pytest.raises(InvalidDomain):
        map_family("reciprocal", square, np.random.default_rng(0))
    with pytest.raises(InvalidDomain):
        map_family("hex-symmetry", square, np.random.default_rng(0))
    with pytest.raises(ValueError):
        map_family("nonsense", square, np.random.default_rng(0))


@pytest.mark.parametrize("k", range(12))
def test_hex_symmetry_family_expectations(triangle, k):
    smap = make_sampled_map("hex-symmetry", triangle, seed=1, index=k)
    _, _, expected = map_family("hex-symmetry", triangle, np.random.default_rng(0), index=k)
    assert classify_map(smap).verdict is expected


def test_families_for():
    cat = dict(default_catalogue())
    assert families_for(cat["triangle"]) == ["projective", "perturbed", "reciprocal"]
    assert families_for(cat["square"]) == ["projective", "perturbed"]
    assert set(MAP_FAMILIES) >= {"projective", "perturbed", "reciprocal", "squeeze", "identity"}


def test_make_sampled_map_is_reproducible(square):
    a = make_sampled_map("projective", square, seed=9)
    b = make_sampled_map("projective", square, seed=9)
    np.testing.assert_array_equal(a.sources, b.sources)
    np.testing.assert_array_equal(a.targets, b.targets)
    c = make_sampled_map("projective", square, seed=10)
    assert not np.array_equal(a.targets, c.targets)


def test_verify_theorem_square_only():
    sq = Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
    rows = verify_theorem([("square", sq)], ClassifyConfig())
    assert [r.family for r in rows] == ["projective", "perturbed"]
    assert rows[0].verdict == Verdict.PROJECTIVE_ISOMETRY.value
    assert rows[1].verdict == Verdict.NOT_ISOMETRY.value
    assert all(r.match for r in rows)


def test_verify_theorem_empty():
    assert verify_theorem([], ClassifyConfig()) == []
