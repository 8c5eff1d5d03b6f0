from __future__ import annotations

import numpy as np
import pytest

from metronoids.engine.metronoid import (
    extreme_point,
    hull_zonotope_bounds,
    membership,
    msupport,
    msupport_many,
    positive_part_integral,
    support_lp,
    threshold,
    zonoid_support_symmetric,
    zonotope_equality_check,
)
from metronoids.errors import DegenerateBodyError, MassError, PreconditionError
from metronoids.geometry.directions import default_net
from metronoids.measures.discrete import zonotope_measure
from metronoids.models.contracts import DirectionNet, DiscreteMeasure, Metronoid


def _random_metronoid(rng: np.random.Generator, n: int, atoms: int) -> Metronoid:
    weights = rng.uniform(0.05, 1.0, atoms)
    weights *= rng.uniform(1.0, 2.5) / weights.sum()
    return Metronoid(DiscreteMeasure(rng.standard_normal((atoms, n)), weights))


def test_greedy_support_matches_lp() -> None:
    rng = np.random.default_rng(11)
    for n in (1, 2, 3, 5):
        m = _random_metronoid(rng, n, 9)
        for theta in rng.standard_normal((10, n)):
            assert msupport(m, theta) == pytest.approx(support_lp(m, theta), abs=1e-9)


def test_equal_weights_use_rank_selection() -> None:
    rng = np.random.default_rng(3)
    m = Metronoid(DiscreteMeasure(rng.standard_normal((12, 2)), np.full(12, 0.25)))
    dirs = default_net(2, 64).directions
    expected = np.array([support_lp(m, theta) for theta in dirs])
    assert msupport_many(m, dirs) == pytest.approx(expected, abs=1e-9)


def test_threshold_splits_the_level_atom() -> None:
    m = Metronoid(DiscreteMeasure([[1.0], [0.0], [-1.0]], [0.5, 0.5, 0.5]))
    result = threshold(m, [1.0])
    assert result.level == pytest.approx(0.0)
    assert result.mass_above == pytest.approx(0.5)
    assert result.mass_at == pytest.approx(0.5)
    assert msupport(m, [1.0]) == pytest.approx(0.5)
    assert extreme_point(m, [1.0]) == pytest.approx([0.5])
    assert msupport(m, [-1.0]) == pytest.approx(0.5)


def test_metronoid_needs_unit_mass() -> None:
    with pytest.raises(MassError):
        Metronoid(DiscreteMeasure([[1.0, 0.0]], [0.5]))
    singleton = Metronoid(DiscreteMeasure([[1.0, 2.0], [3.0, 0.0]], [0.5, 0.5]))
    assert singleton.is_singleton
    assert msupport(singleton, [0.0, 1.0]) == pytest.approx(1.0)
    with pytest.raises(DegenerateBodyError):
        msupport(singleton, [0.0, 0.0])


def test_cross_measure_membership() -> None:
    m = Metronoid(DiscreteMeasure([[1, 0], [-1, 0], [0, 1], [0, -1]], [1.0, 1.0, 1.0, 1.0]))
    assert membership(m, [0.2, 0.2]).status == "inside"
    boundary = membership(m, [1.0, 0.0])
    assert boundary.status == "boundary"
    assert boundary.contains
    outside = membership(m, [0.8, 0.8])
    assert outside.status == "outside"
    assert outside.coefficients is None


def test_membership_coefficients_reproduce_the_point() -> None:
    mu = DiscreteMeasure([[2.0, 0.0], [0.0, 2.0], [-1.0, -1.0]], [0.6, 0.6, 0.6])
    cert = membership(Metronoid(mu), [0.3, 0.5])
    assert cert.contains
    lam = cert.coefficients
    assert lam.sum() == pytest.approx(1.0)
    assert np.all(lam <= mu.weights + 1e-9)
    assert lam @ mu.positions == pytest.approx([0.3, 0.5])


def test_membership_marks_vertices_between_net_directions() -> None:
    corner = [0.8, 0.8]
    mu = DiscreteMeasure([[1.0, 0.0], [0.0, 1.0], corner, [-1.0, -1.0]], [0.6, 0.6, 1.0, 0.6])
    m = Metronoid(mu)
    axes = DirectionNet(np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]), "axes", 4)
    assert msupport(m, [1.0, 0.0]) - corner[0] == pytest.approx(0.12)
    assert membership(m, corner, axes).status == "boundary"
    assert membership(m, m.barycenter, axes).status == "inside"
    assert membership(m, [0.45, 0.45], axes).status == "inside"


def test_flat_metronoid_has_no_interior() -> None:
    segment = Metronoid(DiscreteMeasure([[-1.0, 0.0], [0.0, 0.0], [1.0, 0.0]], [0.6, 0.6, 0.6]))
    assert membership(segment, [0.0, 0.0]).status == "boundary"
    assert membership(segment, [0.0, 0.1]).status == "outside"


def test_metronoid_sits_below_hull_and_zonotope() -> None:
    rng = np.random.default_rng(5)
    m = _random_metronoid(rng, 3, 7)
    for theta in rng.standard_normal((20, 3)):
        h_m, h_conv, h_z = hull_zonotope_bounds(m, theta)
        assert h_m <= h_conv + 1e-9
        assert h_m <= h_z + 1e-9
        assert h_m <= positive_part_integral(m, theta) + 1e-9


def test_half_zonoid_formula_for_symmetric_measures() -> None:
    mu = DiscreteMeasure([[0.0, 0.0], [1.0, 2.0], [-1.0, -2.0], [3.0, 0.0], [-3.0, 0.0]], [1.0, 0.25, 0.25, 0.25, 0.25])
    m = Metronoid(mu)
    for theta in default_net(2, 32).directions:
        assert zonoid_support_symmetric(m, theta) == pytest.approx(msupport(m, theta), abs=1e-12)
    lopsided = Metronoid(DiscreteMeasure([[1.0, 0.0], [-1.0, 0.0]], [1.0, 1.0]))
    with pytest.raises(PreconditionError):
        zonoid_support_symmetric(lopsided, [1.0, 0.0])


def test_zonotope_measure_equality() -> None:
    gens = np.array([[1.0, 0.0], [0.5, 1.0], [-0.3, 0.7]])
    report = zonotope_equality_check(Metronoid(zonotope_measure(gens)))
    assert report.equal
    assert report.worst_gap <= 1e-9
    segment = Metronoid(DiscreteMeasure([[1.0, 0.0], [0.0, 1.0]], [1.0, 1.0]))
    unequal = zonotope_equality_check(segment)
    assert not unequal
    assert unequal.witness is not None
