from __future__ import annotations

import numpy as np
import pytest

from metronoids.errors import PreconditionError
from metronoids.models.contracts import ConvexBody
from metronoids.vertex_index.search import fvein_search, zonotope_cover_cost

AXES = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])


def test_zonotope_cover_cost() -> None:
    assert zonotope_cover_cost(AXES, ConvexBody.cross(2)) == (pytest.approx(4.0), True)
    cost, feasible = zonotope_cover_cost(0.4 * AXES, ConvexBody.cross(2))
    assert cost == pytest.approx(1.6)
    assert not feasible
    assert zonotope_cover_cost(AXES, ConvexBody.ball(2))[1]
    assert not zonotope_cover_cost(np.zeros((2, 2)), ConvexBody.ball(2))[1]
    with pytest.raises(PreconditionError):
        zonotope_cover_cost(AXES, ConvexBody.zonotope_one_sided(AXES))


def test_search_recovers_the_cross_polytope_optimum() -> None:
    result = fvein_search(ConvexBody.cross(2), 4, seed=20240601, iterations=200, restarts=2)
    assert result.status == "PASSED"
    cert = result.certificate
    assert cert.kind == "exact"
    assert 4.0 - 4e-9 <= cert.cost <= 4.2
    history = np.asarray(result.best_costs)
    assert np.all(np.diff(history) <= 0.0)
    assert result.restarts == 2


def test_search_on_the_disc_is_net_verified() -> None:
    result = fvein_search(ConvexBody.ball(2), 4, seed=3, iterations=100, restarts=1)
    assert result.status == "PASSED"
    assert result.certificate.kind == "sampled"
    assert result.certificate.cost <= 4.0 * (1.0 + 1e-5)


def test_search_is_reproducible() -> None:
    first = fvein_search(ConvexBody.cross(2), 6, seed=9, iterations=60, restarts=2)
    second = fvein_search(ConvexBody.cross(2), 6, seed=9, iterations=60, restarts=2)
    assert first.best_costs == second.best_costs
    assert np.array_equal(first.certificate.measure.positions, second.certificate.measure.positions)


def test_search_preconditions() -> None:
    with pytest.raises(PreconditionError, match="symmetric"):
        fvein_search(ConvexBody.zonotope_one_sided(AXES), 4, seed=0, iterations=10)
    with pytest.raises(PreconditionError, match="n <= 6"):
        fvein_search(ConvexBody.cross(7), 14, seed=0, iterations=10)
    with pytest.raises(PreconditionError):
        fvein_search(ConvexBody.cross(2), 0, seed=0, iterations=10)
    with pytest.raises(PreconditionError):
        fvein_search(ConvexBody.cross(2), 17, seed=0, iterations=10)
    with pytest.raises(PreconditionError):
        fvein_search(ConvexBody.cross(2), 4, seed=0, iterations=0)


@pytest.mark.slow
def test_search_recovers_the_octahedron_optimum() -> None:
    result = fvein_search(ConvexBody.cross(3), 6, seed=20240601, iterations=10_000, restarts=8)
    assert result.status == "PASSED"
    assert result.certificate.kind == "exact"
    assert 6.0 - 6e-9 <= result.certificate.cost <= 6.3


@pytest.mark.slow
def test_search_with_sixteen_generators_nears_pi_on_the_disc() -> None:
    result = fvein_search(ConvexBody.ball(2), 16, seed=20240601, iterations=10_000, restarts=8)
    assert result.status == "PASSED"
    assert result.certificate.kind == "sampled"
    assert result.certificate.cost <= 1.10 * np.pi
    assert result.certificate.valid
