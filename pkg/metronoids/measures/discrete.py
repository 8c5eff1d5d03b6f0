from __future__ import annotations

from typing import Any

import numpy as np

from metronoids.errors import DimensionMismatchError, MassError, PreconditionError
from metronoids.geometry.bodies import gauge_many
from metronoids.geometry.tolerances import MERGE_TOL
from metronoids.models.contracts import ConvexBody, DiscreteMeasure, LinearMap, require_mass_at_least_one


def total_mass(mu: DiscreteMeasure) -> float:
    return float(mu.weights.sum())


def transport_cost(mu: DiscreteMeasure, body: ConvexBody) -> float:
    """Sum of w_i * ||x_i||_K."""
    if mu.dim != body.dim:
        raise DimensionMismatchError(f"measure in R^{mu.dim}, body in R^{body.dim}")
    if len(mu) == 0:
        return 0.0
    return float(mu.weights @ gauge_many(body, mu.positions))


def barycenter(mu: DiscreteMeasure) -> np.ndarray:
    mass = total_mass(mu)
    if mass <= 0:
        raise MassError("the empty measure has no barycenter")
    return (mu.weights @ mu.positions) / mass


def _position_keys(positions: np.ndarray, tol: float = MERGE_TOL) -> np.ndarray:
    return np.round(positions / tol).astype(np.int64) if len(positions) else np.zeros((0, positions.shape[1]), dtype=np.int64)


def merge_atoms(mu: DiscreteMeasure, tol: float = MERGE_TOL) -> DiscreteMeasure:
    """Combine atoms whose positions agree on the tol-grid; first occurrence keeps its position."""
    if len(mu) == 0:
        return mu
    keys = _position_keys(mu.positions, tol)
    _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    weights = np.zeros(len(first))
    np.add.at(weights, inverse, mu.weights)
    order = np.argsort(first, kind="stable")
    return DiscreteMeasure(mu.positions[first[order]], weights[order])


def is_origin(positions: np.ndarray, tol: float = MERGE_TOL) -> np.ndarray:
    return np.all(np.abs(positions) <= tol, axis=1)


def origin_weight(mu: DiscreteMeasure) -> float:
    if len(mu) == 0:
        return 0.0
    return float(mu.weights[is_origin(mu.positions)].sum())


def off_origin(mu: DiscreteMeasure) -> DiscreteMeasure:
    keep = ~is_origin(mu.positions)
    return DiscreteMeasure(mu.positions[keep].reshape(-1, mu.dim), mu.weights[keep])


def add_origin_atom(mu: DiscreteMeasure, weight: float = 1.0) -> DiscreteMeasure:
    positions = np.vstack([mu.positions, np.zeros((1, mu.dim))])
    weights = np.concatenate([mu.weights, [weight]])
    return merge_atoms(DiscreteMeasure(positions, weights))


def concat(first: DiscreteMeasure, second: DiscreteMeasure) -> DiscreteMeasure:
    if first.dim != second.dim:
        raise DimensionMismatchError("measures live in different dimensions")
    return DiscreteMeasure(np.vstack([first.positions, second.positions]), np.concatenate([first.weights, second.weights]))


def pushforward(transform: LinearMap, mu: DiscreteMeasure) -> DiscreteMeasure:
    transform.require_invertible()
    if transform.dim != mu.dim:
        raise DimensionMismatchError(f"map on R^{transform.dim}, measure in R^{mu.dim}")
    return DiscreteMeasure(transform.apply(mu.positions), mu.weights.copy())


def _canonical_sign(keys: np.ndarray) -> np.ndarray:
    signs = np.ones(len(keys))
    for row, key in enumerate(keys):
        nonzero = np.flatnonzero(key)
        if nonzero.size and key[nonzero[0]] < 0:
            signs[row] = -1.0
    return signs


def symmetrize(mu: DiscreteMeasure) -> DiscreteMeasure:
    """(mu(A) + mu(-A)) / 2, merged so every atom (x, w) has the exact partner (-x, w)."""
    if len(mu) == 0:
        return mu
    signs = _canonical_sign(_position_keys(mu.positions))
    canonical = merge_atoms(DiscreteMeasure(mu.positions * signs[:, None], mu.weights))
    at_origin = is_origin(canonical.positions)
    positions = [canonical.positions[at_origin]]
    weights = [canonical.weights[at_origin]]
    plus = canonical.positions[~at_origin]
    half = 0.5 * canonical.weights[~at_origin]
    positions.extend([plus, -plus])
    weights.extend([half, half])
    return DiscreteMeasure(np.vstack(positions), np.concatenate(weights))


def is_symmetric_measure(mu: DiscreteMeasure, tol: float = 1e-12) -> bool:
    if len(mu) == 0:
        return True
    merged = merge_atoms(mu)
    keys = _position_keys(merged.positions)
    lookup = {tuple(k): w for k, w in zip(keys.tolist(), merged.weights)}
    for key, weight in lookup.items():
        partner = lookup.get(tuple(-v for v in key))
        if partner is None or abs(partner - weight) > tol * max(1.0, weight):
            return False
    return True


def radial_rescale(mu: DiscreteMeasure, factors: Any) -> DiscreteMeasure:
    """Atoms (r_i x_i, w_i / r_i) for the off-origin atoms, plus a unit atom at the origin."""
    rest = off_origin(mu)
    r = np.asarray(factors, dtype=float).reshape(-1)
    if r.size != len(rest):
        raise DimensionMismatchError(f"{len(rest)} off-origin atoms but {r.size} factors")
    if np.any(r < 1.0) or not np.all(np.isfinite(r)):
        raise PreconditionError("radial factors must be finite and >= 1")
    scaled = DiscreteMeasure(rest.positions * r[:, None], rest.weights / r)
    return add_origin_atom(scaled, 1.0)


def normalize_probability(mu: DiscreteMeasure) -> DiscreteMeasure:
    """Probability measure with atoms (r x_i, w_i / r), r the total mass."""
    r = total_mass(mu)
    require_mass_at_least_one(r)
    return DiscreteMeasure(mu.positions * r, mu.weights / r)


def truncate(mu: DiscreteMeasure, radius: float) -> DiscreteMeasure:
    """delta_0 plus the atoms with |x| >= radius."""
    if not radius > 0:
        raise PreconditionError("truncation radius must be positive")
    keep = np.linalg.norm(mu.positions, axis=1) >= radius if len(mu) else np.zeros(0, dtype=bool)
    kept = DiscreteMeasure(mu.positions[keep].reshape(-1, mu.dim), mu.weights[keep])
    origin = DiscreteMeasure(np.zeros((1, mu.dim)), np.ones(1))
    return concat(origin, kept)


def zonotope_measure(generators: Any) -> DiscreteMeasure:
    """Measure sum (1/m) delta_{m y_i} + delta_0 whose metronoid is the one-sided zonotope Z(y)."""
    gens = np.atleast_2d(np.asarray(generators, dtype=float))
    gens = gens[np.linalg.norm(gens, axis=1) > 0]
    m = len(gens)
    if m == 0:
        raise PreconditionError("zonotope measure needs a nonzero generator")
    measure = DiscreteMeasure(m * gens, np.full(m, 1.0 / m))
    return add_origin_atom(measure, 1.0)
