from __future__ import annotations

import math

import numpy as np
import pytest

from metronoids.errors import DegenerateBodyError, DimensionMismatchError, UnsupportedPairError
from metronoids.geometry.bodies import (
    as_vpolytope,
    bm_known_distance,
    gauge,
    gauge_many,
    origin_is_interior,
    support,
    support_many,
    vertex_array,
    zonotope_vertices_2d,
)
from metronoids.geometry.polygons import polygon_area
from metronoids.models.contracts import ConvexBody


def test_support_closed_forms() -> None:
    assert support(ConvexBody.ball(2), [0.0, 1.0]) == pytest.approx(1.0)
    assert support(ConvexBody.cross(2), [1.0, 1.0]) == pytest.approx(1.0)
    assert support(ConvexBody.cube(3, 2.0), [1.0, -1.0, 0.5]) == pytest.approx(5.0)
    zonotope = ConvexBody.zonotope_one_sided([[1, 0], [-1, 0], [0, 1], [0, -1]])
    assert support(zonotope, [1.0, 0.0]) == pytest.approx(1.0)


def test_support_rejects_zero_and_mismatched_directions() -> None:
    with pytest.raises(DegenerateBodyError):
        support(ConvexBody.ball(2), [0.0, 0.0])
    with pytest.raises(DimensionMismatchError):
        support(ConvexBody.ball(2), [1.0, 0.0, 0.0])


def test_gauge_closed_forms_and_lp() -> None:
    assert gauge(ConvexBody.cross(2), [0.5, -0.5]) == pytest.approx(1.0)
    assert gauge(ConvexBody.ball(2, 2.0), [3.0, 4.0]) == pytest.approx(2.5)
    diamond = as_vpolytope(ConvexBody.cross(2))
    assert gauge(diamond, [0.2, 0.3]) == pytest.approx(0.5, abs=1e-9)


def test_gauge_lp_matches_closed_forms() -> None:
    rng = np.random.default_rng(3)
    pts = rng.standard_normal((20, 3))
    for kind in ("cross", "cube"):
        body = ConvexBody(kind, 3, radius=1.0)
        lp = gauge_many(as_vpolytope(body), pts)
        assert np.allclose(lp, gauge_many(body, pts), atol=1e-8)
    cube_as_zonotope = ConvexBody.zonotope_symmetric(np.eye(3))
    assert np.allclose(gauge_many(cube_as_zonotope, pts), np.abs(pts).max(axis=1), atol=1e-8)


def test_symmetric_bodies_have_even_support() -> None:
    rng = np.random.default_rng(11)
    dirs = rng.standard_normal((200, 3))
    bodies = [
        ConvexBody.ball(3),
        ConvexBody.cube(3),
        ConvexBody.cross(3),
        ConvexBody.zonotope_symmetric(rng.standard_normal((5, 3))),
    ]
    for body in bodies:
        assert np.array_equal(support_many(body, dirs), support_many(body, -dirs))
    simplex = ConvexBody.vpolytope(np.vstack([np.eye(3), -np.ones((1, 3))]))
    assert np.all(support_many(simplex, dirs) + support_many(simplex, -dirs) >= 0.0)


def test_gauge_puts_points_on_the_boundary() -> None:
    rng = np.random.default_rng(5)
    angles = np.linspace(0.0, 2 * np.pi, 9)[:-1] + rng.uniform(-0.3, 0.3, 8)
    radii = rng.uniform(0.5, 2.0, 8)
    body = ConvexBody.vpolytope(radii[:, None] * np.column_stack([np.cos(angles), np.sin(angles)]))
    assert origin_is_interior(body)
    dirs = np.column_stack([np.cos(np.linspace(0, 2 * np.pi, 1000)), np.sin(np.linspace(0, 2 * np.pi, 1000))])
    h = support_many(body, dirs)
    for x in rng.standard_normal((10, 2)):
        t = gauge(body, x)
        assert np.max(dirs @ (x / t) - (1 - 1e-6) * h) >= 0.0


def test_origin_outside_polytope_is_flagged() -> None:
    body = ConvexBody.vpolytope([[1.0, 1.0], [2.0, 1.0], [1.0, 2.0]])
    assert not origin_is_interior(body)
    with pytest.raises(DegenerateBodyError):
        gauge(body, [1.0, 1.0])


def test_planar_zonotope_polygon() -> None:
    square = zonotope_vertices_2d(np.eye(2))
    assert polygon_area(square) == pytest.approx(4.0)
    one_sided = zonotope_vertices_2d(np.eye(2), symmetric=False)
    assert polygon_area(one_sided) == pytest.approx(1.0)
    assert one_sided.min(axis=0) == pytest.approx([0.0, 0.0])


def test_vertex_array_counts() -> None:
    assert len(vertex_array(ConvexBody.cube(3))) == 8
    assert len(vertex_array(ConvexBody.cross(4))) == 8


def test_banach_mazur_table() -> None:
    assert bm_known_distance("ball", "cross", 4) == pytest.approx(2.0)
    assert bm_known_distance("ball", "ball", 7) == 1.0
    assert bm_known_distance("ball", "cube", 9) == pytest.approx(3.0)
    assert bm_known_distance("cube", "ball", 2) == pytest.approx(math.sqrt(2))
    with pytest.raises(UnsupportedPairError, match="not in table"):
        bm_known_distance("cube", "cross", 3)
