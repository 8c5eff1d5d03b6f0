from __future__ import annotations

import math

import numpy as np
import pytest

from metronoids.constructions.volumes import mean_abs_inner
from metronoids.errors import DegenerateBodyError, MassError
from metronoids.measures.discrete import is_symmetric_measure
from metronoids.models.contracts import DiscreteMeasure
from metronoids.vertex_index.centroid import centroid_body, centroid_energy, cross_family, sphere_family


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_cross_family_energy_equals_dimension(n: int) -> None:
    energy = centroid_energy(cross_family(n))
    assert energy == pytest.approx(float(n), rel=1e-9)
    assert energy >= math.sqrt(n)


def test_sphere_family_energy_is_close_to_closed_form() -> None:
    mu = sphere_family(2, 10_000, seed=20240601)
    assert is_symmetric_measure(mu)
    assert mu.weights.sum() == pytest.approx(1.0)
    closed = 1.0 / mean_abs_inner(2)
    assert centroid_energy(mu) == pytest.approx(closed, rel=0.02)


@pytest.mark.slow
@pytest.mark.parametrize("n", [3, 5, 8])
def test_sphere_family_energy_exceeds_sqrt_n(n: int) -> None:
    energy = centroid_energy(sphere_family(n, 10_000, seed=20240601))
    assert energy >= math.sqrt(n)
    if n == 3:
        assert energy == pytest.approx(1.0 / mean_abs_inner(3), rel=0.02)


def test_centroid_body_generators() -> None:
    mu = DiscreteMeasure([[0.0, 0.0], [2.0, 0.0], [0.0, 4.0]], [0.5, 0.25, 0.25])
    body = centroid_body(mu)
    assert body.generators == pytest.approx(np.array([[0.5, 0.0], [0.0, 1.0]]))
    assert body.body.kind == "zonotope_symmetric"


def test_centroid_body_preconditions() -> None:
    with pytest.raises(MassError):
        centroid_body(DiscreteMeasure([[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]], [0.5, 0.5, 0.5]))
    with pytest.raises(DegenerateBodyError):
        centroid_body(DiscreteMeasure([[1.0, 1.0], [2.0, 2.0], [-1.0, -1.0]], [0.25, 0.25, 0.5]))
