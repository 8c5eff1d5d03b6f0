from __future__ import annotations

import math

import numpy as np
import pytest

from metronoids.errors import PreconditionError
from metronoids.geometry.directions import exact_2d_angles
from metronoids.measures.discrete import concat, is_symmetric_measure, transport_cost
from metronoids.models.contracts import ConvexBody, DiscreteMeasure
from metronoids.vertex_index.certificates import (
    ball_averaged_lower_bound,
    ball_certificate,
    ball_certificate_cost,
    bm_transfer,
    cross_polytope_certificate,
    cross_polytope_lower_functional,
    cross_polytope_measure,
    equivalence_pipeline,
    project_certificate,
    sphere_averaged_positive_part,
)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_cross_polytope_certificate_is_exact(n: int) -> None:
    cert = cross_polytope_certificate(n)
    assert cert.cost == pytest.approx(2.0 * n, abs=1e-12)
    assert cert.valid
    assert cert.verified.exact
    assert cert.kind == "exact"


def test_ball_certificate_costs() -> None:
    assert ball_certificate_cost(2) == pytest.approx(math.pi)
    assert ball_averaged_lower_bound(2) == pytest.approx(math.pi)
    for n in (10, 50, 100):
        assert ball_certificate_cost(n) / math.sqrt(2.0 * math.pi * n) == pytest.approx(1.0, abs=0.05)
    cert = ball_certificate(2, 10_000, seed=20240601)
    assert cert.kind == "sampled"
    assert cert.cost == pytest.approx(math.pi, rel=1e-9)
    assert cert.valid
    with pytest.raises(PreconditionError):
        ball_certificate(1, 100, seed=0)


def test_cross_lower_functional() -> None:
    rng = np.random.default_rng(4)
    for n in (2, 3, 4):
        base = cross_polytope_measure(n)
        assert cross_polytope_lower_functional(base, n) == pytest.approx(2.0 * n)
        extra = DiscreteMeasure(rng.standard_normal((5, n)), rng.uniform(0.1, 1.0, 5))
        mu = concat(base, extra)
        assert cross_polytope_lower_functional(mu, n) >= 2.0 * n - 1e-12
        assert transport_cost(mu, ConvexBody.cross(n)) >= 2.0 * n - 1e-12


def test_sphere_averaged_positive_part() -> None:
    value = sphere_averaged_positive_part(cross_polytope_measure(2), exact_2d_angles(720))
    assert value == pytest.approx(4.0 / math.pi, rel=1e-4)


def test_bm_transfer() -> None:
    cert = cross_polytope_certificate(2)
    assert bm_transfer(cert, math.sqrt(2.0)) == pytest.approx(4.0 * math.sqrt(2.0))
    with pytest.raises(PreconditionError):
        bm_transfer(cert, 0.5)


def test_projection_keeps_containment_and_lowers_cost() -> None:
    projected, cheaper = project_certificate(cross_polytope_certificate(3), [0, 2])
    assert cheaper
    assert projected.body.dim == 2
    assert projected.cost == pytest.approx(4.0)
    assert projected.valid
    with pytest.raises(PreconditionError):
        project_certificate(cross_polytope_certificate(3), [0, 0])
    with pytest.raises(PreconditionError):
        project_certificate(cross_polytope_certificate(3), [3])


def test_equivalence_pipeline_on_the_cross_measure() -> None:
    nu, report = equivalence_pipeline(cross_polytope_measure(2), ConvexBody.cross(2))
    assert is_symmetric_measure(nu)
    assert nu.weights.sum() == pytest.approx(1.0)
    assert report.cost_before == pytest.approx(4.0)
    assert report.cost_gap == pytest.approx(0.0, abs=1e-12)
    assert report.bridge_gap <= 1e-10
    assert report.passed


def test_equivalence_pipeline_preconditions() -> None:
    with pytest.raises(PreconditionError, match="symmetric body"):
        equivalence_pipeline(cross_polytope_measure(2), ConvexBody.zonotope_one_sided([[1.0, 0.0], [0.0, 1.0]]))
    with pytest.raises(PreconditionError, match="does not generate"):
        equivalence_pipeline(cross_polytope_measure(2), ConvexBody.cube(2))
