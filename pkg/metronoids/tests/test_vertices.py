from __future__ import annotations

import numpy as np
import pytest

from metronoids.engine.metronoid import membership, msupport_many
from metronoids.engine.vertices import vertices, vertices_available, vertices_brute_force, vertices_sweep_2d
from metronoids.errors import PreconditionError
from metronoids.geometry.directions import default_net
from metronoids.geometry.polygons import polygon_area
from metronoids.measures.discrete import zonotope_measure
from metronoids.models.contracts import DiscreteMeasure, Metronoid


def _sorted_rows(points: np.ndarray) -> np.ndarray:
    return points[np.lexsort(points.T[::-1])]


def test_zonotope_measure_has_the_square_as_metronoid() -> None:
    m = Metronoid(zonotope_measure([[1.0, 0.0], [0.0, 1.0]]))
    for method in ("sweep", "brute"):
        verts = _sorted_rows(vertices(m, method))
        assert verts == pytest.approx(np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float), abs=1e-12)


def test_cross_measure_vertices() -> None:
    m = Metronoid(DiscreteMeasure([[1, 0], [-1, 0], [0, 1], [0, -1]], np.ones(4)))
    verts = vertices(m)
    assert len(verts) == 4
    assert polygon_area(verts) == pytest.approx(2.0)


def _random_measure(rng: np.random.Generator, n_atoms: int, dim: int) -> DiscreteMeasure:
    weights = rng.uniform(0.15, 0.6, n_atoms)
    weights *= rng.uniform(1.1, 2.5) / weights.sum()
    return DiscreteMeasure(rng.standard_normal((n_atoms, dim)), weights)


@pytest.mark.parametrize("n_atoms", range(3, 13))
def test_sweep_and_brute_force_agree(n_atoms: int) -> None:
    m = Metronoid(_random_measure(np.random.default_rng(21 + n_atoms), n_atoms, 2))
    sweep = _sorted_rows(vertices_sweep_2d(m))
    brute = _sorted_rows(vertices_brute_force(m))
    assert sweep.shape == brute.shape
    assert sweep == pytest.approx(brute, abs=1e-9)


@pytest.mark.parametrize(("dim", "method"), [(2, "sweep"), (2, "brute"), (3, "brute")])
def test_every_vertex_is_on_the_boundary(dim: int, method: str) -> None:
    rng = np.random.default_rng(1)
    for _ in range(6):
        m = Metronoid(_random_measure(rng, 8, dim))
        for vertex in vertices(m, method):
            assert membership(m, vertex).status == "boundary"
        assert membership(m, m.barycenter).status == "inside"


def test_vertices_attain_the_support() -> None:
    rng = np.random.default_rng(2)
    m = Metronoid(DiscreteMeasure(rng.standard_normal((7, 3)), np.full(7, 0.3)))
    verts = vertices(m)
    dirs = default_net(3, 200).directions
    assert (verts @ dirs.T).max(axis=0) == pytest.approx(msupport_many(m, dirs), abs=1e-9)


def test_line_singleton_and_limits() -> None:
    segment = Metronoid(DiscreteMeasure([[-1.0], [0.0], [2.0]], [0.5, 0.5, 0.5]))
    assert vertices(segment).reshape(-1) == pytest.approx([-0.5, 1.0])
    singleton = Metronoid(DiscreteMeasure([[2.0, 0.0], [0.0, 2.0]], [0.5, 0.5]))
    assert vertices(singleton).tolist() == [[1.0, 1.0]]
    with pytest.raises(PreconditionError):
        vertices(segment, "qhull")
    crowd = Metronoid(DiscreteMeasure(np.random.default_rng(0).standard_normal((30, 3)), np.full(30, 0.1)))
    assert not vertices_available(crowd)
    with pytest.raises(PreconditionError):
        vertices_brute_force(crowd)
