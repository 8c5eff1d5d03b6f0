"""Centroid bodies Z_1(mu) of probability measures and the energy integral of |x| in their norm."""

from __future__ import annotations

import logging

import numpy as np

from metronoids.errors import DegenerateBodyError, MassError
from metronoids.geometry.bodies import gauge_many
from metronoids.measures.discrete import symmetrize, total_mass
from metronoids.measures.sampling import sample_sphere
from metronoids.models.contracts import CentroidBody, DiscreteMeasure, SamplerSpec

logger = logging.getLogger(__name__)

PROBABILITY_TOL = 1e-9


def _require_probability(mu: DiscreteMeasure) -> None:
    mass = total_mass(mu)
    if abs(mass - 1.0) > PROBABILITY_TOL:
        raise MassError(f"centroid body needs a probability measure, total mass is {mass!r}")
    if len(mu) < mu.dim + 1:
        raise DegenerateBodyError("atoms do not affinely span the space: gauge undefined")
    spread = mu.positions[1:] - mu.positions[0]
    if np.linalg.matrix_rank(spread) < mu.dim:
        raise DegenerateBodyError("atoms do not affinely span the space: gauge undefined")


def centroid_body(mu: DiscreteMeasure) -> CentroidBody:
    """Z_1(mu) as the symmetric zonotope with generators w_i x_i."""
    _require_probability(mu)
    gens = mu.weights[:, None] * mu.positions
    return CentroidBody(gens[np.linalg.norm(gens, axis=1) > 0])


def centroid_energy(mu: DiscreteMeasure) -> float:
    body = centroid_body(mu).body
    energy = float(mu.weights @ gauge_many(body, mu.positions))
    logger.debug("centroid energy n=%d atoms=%d: %.6g", mu.dim, len(mu), energy)
    return energy


def sphere_family(n: int, count: int, seed: int) -> DiscreteMeasure:
    """Symmetrized uniform probability on a sphere sample."""
    half = sample_sphere(SamplerSpec("sphere", n, max(count // 2, n), seed, radius=1.0, total_mass=1.0))
    return symmetrize(half)


def cross_family(n: int) -> DiscreteMeasure:
    eye = np.eye(n)
    return DiscreteMeasure(np.vstack([eye, -eye]), np.full(2 * n, 1.0 / (2 * n)))
