from __future__ import annotations

import numpy as np
import pytest

from metronoids.errors import DimensionMismatchError, MassError, PreconditionError, SingularMapError
from metronoids.measures.discrete import (
    add_origin_atom,
    barycenter,
    concat,
    is_symmetric_measure,
    merge_atoms,
    normalize_probability,
    origin_weight,
    pushforward,
    radial_rescale,
    symmetrize,
    transport_cost,
    truncate,
    zonotope_measure,
)
from metronoids.models.contracts import ConvexBody, DiscreteMeasure, LinearMap


def test_measure_rejects_bad_weights() -> None:
    with pytest.raises(MassError):
        DiscreteMeasure([[1.0, 0.0]], [-0.5])
    with pytest.raises(MassError):
        DiscreteMeasure([[1.0, 0.0]], [0.0])
    with pytest.raises(DimensionMismatchError):
        DiscreteMeasure([[1.0, 0.0], [0.0, 1.0]], [1.0])


def test_merge_atoms_keeps_first_position() -> None:
    mu = DiscreteMeasure([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]], [1.0, 3.0, 2.0])
    merged = merge_atoms(mu)
    assert merged.positions.tolist() == [[1.0, 0.0], [0.0, 1.0]]
    assert merged.weights.tolist() == [3.0, 3.0]


def test_transport_cost_and_barycenter() -> None:
    mu = DiscreteMeasure([[1.0, 1.0], [-2.0, 0.0]], [0.5, 0.25])
    assert transport_cost(mu, ConvexBody.cross(2)) == pytest.approx(1.5)
    assert transport_cost(mu, ConvexBody.cube(2)) == pytest.approx(1.0)
    assert barycenter(mu) == pytest.approx([0.0, 2.0 / 3.0])
    with pytest.raises(MassError):
        barycenter(DiscreteMeasure.empty(2))
    with pytest.raises(DimensionMismatchError):
        transport_cost(mu, ConvexBody.ball(3))


def test_symmetrize_pairs_every_atom() -> None:
    mu = DiscreteMeasure([[-1.0, 0.0], [0.0, 0.0], [0.5, 2.0]], [2.0, 1.0, 1.0])
    sym = symmetrize(mu)
    assert is_symmetric_measure(sym)
    assert not is_symmetric_measure(mu)
    assert sym.weights.sum() == pytest.approx(4.0)
    assert origin_weight(sym) == pytest.approx(1.0)
    lookup = {tuple(x): w for x, w in zip(sym.positions.tolist(), sym.weights)}
    assert lookup[(1.0, 0.0)] == pytest.approx(1.0)
    assert lookup[(-1.0, 0.0)] == pytest.approx(1.0)
    assert lookup[(-0.5, -2.0)] == pytest.approx(0.5)


def test_radial_rescale_keeps_cost_and_adds_origin() -> None:
    mu = DiscreteMeasure([[1.0, 0.0], [0.0, -1.0]], [0.5, 0.75])
    rescaled = radial_rescale(mu, [2.0, 4.0])
    assert origin_weight(rescaled) == pytest.approx(1.0)
    assert transport_cost(rescaled, ConvexBody.ball(2)) == pytest.approx(transport_cost(mu, ConvexBody.ball(2)))
    with pytest.raises(PreconditionError):
        radial_rescale(mu, [0.5, 2.0])
    with pytest.raises(DimensionMismatchError):
        radial_rescale(mu, [2.0])


def test_normalize_probability_scales_positions() -> None:
    mu = DiscreteMeasure([[1.0], [-1.0]], [1.0, 1.0])
    prob = normalize_probability(mu)
    assert prob.weights.sum() == pytest.approx(1.0)
    assert prob.positions.reshape(-1).tolist() == [2.0, -2.0]
    with pytest.raises(MassError):
        normalize_probability(DiscreteMeasure([[1.0]], [0.5]))


def test_truncate_keeps_far_atoms_and_origin() -> None:
    mu = DiscreteMeasure([[0.5, 0.0], [0.0, 2.0], [3.0, 4.0]], [1.0, 1.0, 1.0])
    truncated = truncate(mu, 1.0)
    assert len(truncated) == 3
    assert origin_weight(truncated) == pytest.approx(1.0)
    with pytest.raises(PreconditionError):
        truncate(mu, 0.0)


def test_zonotope_measure_layout() -> None:
    zm = zonotope_measure([[1.0, 0.0], [0.0, 2.0], [0.0, 0.0]])
    assert len(zm) == 3
    assert origin_weight(zm) == pytest.approx(1.0)
    assert zm.weights.sum() == pytest.approx(2.0)
    assert transport_cost(zm, ConvexBody.ball(2)) == pytest.approx(3.0)
    with pytest.raises(PreconditionError):
        zonotope_measure([[0.0, 0.0]])


def test_pushforward_and_concat() -> None:
    mu = DiscreteMeasure([[1.0, 2.0]], [1.0])
    moved = pushforward(LinearMap([[0.0, 1.0], [1.0, 0.0]]), mu)
    assert moved.positions.tolist() == [[2.0, 1.0]]
    with pytest.raises(SingularMapError):
        pushforward(LinearMap([[1.0, 1.0], [1.0, 1.0]]), mu)
    with pytest.raises(DimensionMismatchError):
        concat(mu, DiscreteMeasure([[1.0]], [1.0]))
    assert len(add_origin_atom(add_origin_atom(mu))) == 2
