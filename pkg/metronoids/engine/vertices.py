from __future__ import annotations

import logging

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from metronoids.errors import PreconditionError
from metronoids.engine.metronoid import extreme_points
from metronoids.geometry.lp import lp_solve
from metronoids.geometry.polygons import polygon_hull
from metronoids.geometry.tolerances import MASS_TOL
from metronoids.models.contracts import LpProblem, Metronoid

logger = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 22
SWEEP_LIMIT = 200
MASK_CHUNK = 1 << 16
DEDUP_TOL = 1e-9


def _dedupe(points: np.ndarray, tol: float = DEDUP_TOL) -> np.ndarray:
    if len(points) == 0:
        return points
    scale = max(1.0, float(np.abs(points).max()))
    keys = np.round(points / (tol * scale)).astype(np.int64)
    _, idx = np.unique(keys, axis=0, return_index=True)
    return points[np.sort(idx)]


def _order(points: np.ndarray) -> np.ndarray:
    if points.shape[1] == 2 and len(points) >= 3:
        return polygon_hull(points)
    return points[np.lexsort(points.T[::-1])]


def vertices_sweep_2d(m: Metronoid) -> np.ndarray:
    """One greedy extreme point per angular cell between order-change events."""
    pos = m.measure.positions
    if m.dim != 2:
        raise PreconditionError("the angle sweep works in the plane only")
    if m.is_singleton:
        return m.barycenter.reshape(1, 2)
    i, j = np.triu_indices(len(pos), k=1)
    diffs = pos[i] - pos[j]
    diffs = diffs[np.linalg.norm(diffs, axis=1) > 0]
    if len(diffs) == 0:
        return extreme_points(m, np.array([[1.0, 0.0]]))
    base = np.arctan2(diffs[:, 1], diffs[:, 0])
    events = np.mod(np.concatenate([base + 0.5 * np.pi, base - 0.5 * np.pi]), 2.0 * np.pi)
    events = np.unique(np.round(events, 15))
    following = np.roll(events, -1)
    following[-1] += 2.0 * np.pi
    mids = 0.5 * (events + following)
    dirs = np.column_stack([np.cos(mids), np.sin(mids)])
    return _order(_dedupe(extreme_points(m, dirs)))


def _candidate_points(m: Metronoid) -> np.ndarray:
    mu = m.measure
    w = mu.weights
    x = mu.positions
    n_atoms = len(w)
    weighted = w[:, None] * x
    bit_values = 1 << np.arange(n_atoms, dtype=np.int64)
    found: list[np.ndarray] = []
    for start in range(0, 1 << n_atoms, MASK_CHUNK):
        masks = np.arange(start, min(start + MASK_CHUNK, 1 << n_atoms), dtype=np.int64)
        bits = (masks[:, None] & bit_values[None, :]) != 0
        mass = bits @ w
        partial = bits.astype(float) @ weighted
        rest = 1.0 - mass
        exact = np.abs(rest) <= MASS_TOL
        if np.any(exact):
            found.append(partial[exact])
        # one fractional atom f outside the mask with 0 < rest <= w_f
        ok = (~bits) & (rest[:, None] > MASS_TOL) & (rest[:, None] <= w[None, :] + MASS_TOL)
        rows, cols = np.nonzero(ok)
        if rows.size:
            found.append(partial[rows] + rest[rows, None] * x[cols])
    if not found:
        return np.zeros((0, m.dim))
    return _dedupe(np.vstack(found))


def _is_extreme(point: np.ndarray, others: np.ndarray) -> bool:
    if len(others) == 0:
        return True
    k = len(others)
    a_eq = np.vstack([others.T, np.ones((1, k))])
    b_eq = np.concatenate([point, [1.0]])
    result = lp_solve(LpProblem(np.zeros(k), a_eq, b_eq, np.zeros(k), np.full(k, np.inf), sense="max"))
    return result.status != "optimal"


def vertices_brute_force(m: Metronoid) -> np.ndarray:
    """Images of the basic solutions of {0 <= lambda <= w, sum lambda = 1}, filtered to extreme points."""
    n_atoms = len(m.measure)
    if n_atoms > BRUTE_FORCE_LIMIT:
        raise PreconditionError(f"brute-force vertex enumeration is capped at {BRUTE_FORCE_LIMIT} atoms, got {n_atoms}")
    if m.is_singleton:
        return m.barycenter.reshape(1, -1)
    cands = _candidate_points(m)
    if m.dim == 1:
        return np.array([[cands[:, 0].min()], [cands[:, 0].max()]]) if len(cands) > 1 else cands
    survivors = cands
    if len(cands) > m.dim:
        try:
            survivors = cands[ConvexHull(cands).vertices]
        except QhullError:
            logger.debug("candidate set is flat; falling back to the LP filter on %d points", len(cands))
    keep = [idx for idx in range(len(survivors)) if _is_extreme(survivors[idx], np.delete(survivors, idx, axis=0))]
    return _order(survivors[keep])


def vertices(m: Metronoid, method: str = "auto") -> np.ndarray:
    if method not in ("auto", "sweep", "brute"):
        raise PreconditionError(f"unknown vertex method {method!r}")
    if m.is_singleton:
        return m.barycenter.reshape(1, -1)
    n_atoms = len(m.measure)
    if method == "sweep" or (method == "auto" and m.dim == 2 and n_atoms <= SWEEP_LIMIT):
        if n_atoms > SWEEP_LIMIT:
            raise PreconditionError(f"the angle sweep is capped at {SWEEP_LIMIT} atoms, got {n_atoms}")
        return vertices_sweep_2d(m)
    return vertices_brute_force(m)


def vertices_available(m: Metronoid) -> bool:
    n_atoms = len(m.measure)
    return m.is_singleton or n_atoms <= BRUTE_FORCE_LIMIT or (m.dim == 2 and n_atoms <= SWEEP_LIMIT)
