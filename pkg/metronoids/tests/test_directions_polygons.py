from __future__ import annotations

import numpy as np
import pytest

from metronoids.errors import DimensionMismatchError, PreconditionError
from metronoids.geometry.directions import default_net, exact_2d_angles, with_axes, with_directions
from metronoids.geometry.polygons import cap_level, clip_halfplane, polygon_area, polygon_centroid, polygon_hull
from metronoids.models.contracts import DirectionNet


def test_exact_angles_are_evenly_spaced() -> None:
    net = exact_2d_angles(4)
    assert net.directions == pytest.approx(np.array([[1, 0], [0, 1], [-1, 0], [0, -1]]), abs=1e-15)
    assert net.generation == "exact-2D-angles"
    assert len(default_net(2)) == 720


def test_sphere_net_is_unit_and_seeded() -> None:
    first = default_net(4, 300, seed=9)
    again = default_net(4, 300, seed=9)
    other = default_net(4, 300, seed=10)
    assert np.linalg.norm(first.directions, axis=1) == pytest.approx(np.ones(300))
    assert np.array_equal(first.directions, again.directions)
    assert not np.array_equal(first.directions, other.directions)
    assert default_net(1).directions.reshape(-1).tolist() == [1.0, -1.0]


def test_net_extensions() -> None:
    net = exact_2d_angles(3)
    axes = with_axes(net)
    assert len(axes) == 7
    assert axes.generation.endswith("+axes")
    extra = with_directions(net, [[3.0, 4.0], [0.0, 0.0]])
    assert len(extra) == 4
    assert extra.directions[-1] == pytest.approx([0.6, 0.8])


def test_direction_net_rejects_non_unit_rows() -> None:
    with pytest.raises(PreconditionError):
        DirectionNet(np.array([[2.0, 0.0]]), generation="exact-2D-angles", count=1)
    with pytest.raises(PreconditionError):
        exact_2d_angles(0)


def test_polygon_hull_area_and_centroid() -> None:
    square = polygon_hull(np.array([[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0.5]], dtype=float))
    assert len(square) == 4
    assert polygon_area(square) == pytest.approx(1.0)
    assert polygon_centroid(square) == pytest.approx([0.5, 0.5])
    triangle = polygon_hull(np.array([[0, 0], [3, 0], [0, 3]], dtype=float))
    assert polygon_centroid(triangle) == pytest.approx([1.0, 1.0])
    segment = polygon_hull(np.array([[0, 0], [1, 1], [2, 2], [0.5, 0.5]], dtype=float))
    assert sorted(map(tuple, segment.tolist())) == [(0.0, 0.0), (2.0, 2.0)]
    with pytest.raises(DimensionMismatchError):
        polygon_hull(np.zeros((3, 3)))


def test_clip_and_cap_level() -> None:
    square = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    theta = np.array([1.0, 0.0])
    assert polygon_area(clip_halfplane(square, theta, 0.5)) == pytest.approx(0.5)
    assert len(clip_halfplane(square, theta, 2.0)) == 0
    assert cap_level(square, theta, 0.25) == pytest.approx(0.75, abs=1e-12)
    with pytest.raises(PreconditionError):
        cap_level(square, theta, 2.0)
