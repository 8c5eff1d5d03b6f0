from __future__ import annotations

import math

import numpy as np
import pytest

from metronoids.engine.containment import contains_body, sandwich_check
from metronoids.engine.floating import cap_threshold, floating_sandwich_check, uniform_cap_extreme_2d
from metronoids.errors import DimensionMismatchError, PreconditionError
from metronoids.geometry.bodies import as_vpolytope
from metronoids.models.contracts import ConvexBody, DiscreteMeasure, Metronoid

SQUARE = ConvexBody.vpolytope([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])


def _cross_metronoid() -> Metronoid:
    return Metronoid(DiscreteMeasure([[1, 0], [-1, 0], [0, 1], [0, -1]], np.ones(4)))


def test_exact_containment_of_polytopes() -> None:
    m = _cross_metronoid()
    report = contains_body(m, as_vpolytope(ConvexBody.cross(2)))
    assert report.passed
    assert report.exact
    assert report.method == "vertex-membership"
    larger = contains_body(m, as_vpolytope(ConvexBody.cross(2, 1.1)))
    assert not larger.passed
    assert larger.witness is not None
    assert larger.worst_slack == pytest.approx(-0.1, abs=1e-9)


def test_net_containment_of_balls() -> None:
    m = _cross_metronoid()
    inside = contains_body(m, ConvexBody.ball(2, 0.7))
    assert inside.passed
    assert not inside.exact
    assert inside.worst_slack == pytest.approx(1.0 / math.sqrt(2.0) - 0.7, abs=1e-6)
    outside = contains_body(m, ConvexBody.ball(2, 0.75))
    assert outside.status == "FAILED"
    with pytest.raises(DimensionMismatchError):
        contains_body(m, ConvexBody.ball(3))


def test_sandwich_factors() -> None:
    m = _cross_metronoid()
    ball = ConvexBody.ball(2, 0.7)
    report = sandwich_check(m, ball, 2.0)
    assert report.passed
    assert report.outer_exact
    assert report.outer_ratio == pytest.approx(1.0 / 0.7)
    assert sandwich_check(m, ball, 1.2).outer_status == "FAILED"
    assert sandwich_check(m, ball, math.inf).outer_status == "SKIPPED"
    with pytest.raises(PreconditionError):
        sandwich_check(m, ball, 0.5)


def test_cap_threshold_and_extreme_point_on_square() -> None:
    assert cap_threshold(SQUARE, 0.4, [1.0, 0.0]) == pytest.approx(0.8, abs=1e-12)
    assert uniform_cap_extreme_2d(SQUARE, 0.4, [2.0, 0.0]) == pytest.approx([0.9, 0.0], abs=1e-12)
    with pytest.raises(PreconditionError):
        cap_threshold(SQUARE, 4.0, [1.0, 0.0])
    with pytest.raises(PreconditionError):
        cap_threshold(SQUARE, 0.4, [0.0, 0.0])
    with pytest.raises(DimensionMismatchError):
        cap_threshold(ConvexBody.cube(2), 0.4, [1.0, 0.0])


@pytest.mark.parametrize("share", [0.05, 0.1, 0.2])
def test_floating_sandwich_holds(share: float) -> None:
    report = floating_sandwich_check(SQUARE, 4.0 * share)
    assert report.status == "PASSED"
    assert report.lower_slack >= 0.0
    assert report.upper_slack >= 0.0
    hexagon = ConvexBody.vpolytope([[math.cos(a), math.sin(a)] for a in np.linspace(0.0, 2 * math.pi, 7)[:-1] + 0.1])
    assert floating_sandwich_check(hexagon, share * 3 * math.sqrt(3) / 2).status == "PASSED"
