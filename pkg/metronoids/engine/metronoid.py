"""Greedy support oracle of M(mu) and the operations built on it.

For a direction theta the atoms are ordered by <x_i, theta>; the threshold
level is where the running weight first reaches one. Everything above the
level is taken in full, the level itself fractionally.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from metronoids.errors import DegenerateBodyError, DimensionMismatchError, PreconditionError
from metronoids.geometry.bodies import support_many
from metronoids.geometry.directions import default_net, with_axes
from metronoids.geometry.lp import lp_solve
from metronoids.geometry.tolerances import BOUNDARY_TOL, LEVEL_TOL, MASS_TOL
from metronoids.measures.discrete import is_symmetric_measure, origin_weight, total_mass
from metronoids.models.contracts import (
    ConvexBody,
    DirectionNet,
    DiscreteMeasure,
    EqualityReport,
    LpProblem,
    MembershipCertificate,
    Metronoid,
    ThresholdResult,
)
from metronoids.pipelines.parallel import parallel_map

CHUNK_ELEMENTS = 4_000_000
MAX_CHUNK = 256


def metronoid(measure: DiscreteMeasure) -> Metronoid:
    return Metronoid(measure)


def _direction_block(m: Metronoid, thetas: Any) -> np.ndarray:
    dirs = np.atleast_2d(np.asarray(thetas, dtype=float))
    if dirs.shape[1] != m.dim:
        raise DimensionMismatchError(f"direction in R^{dirs.shape[1]} for a metronoid in R^{m.dim}")
    if np.any(np.all(dirs == 0.0, axis=1)):
        raise DegenerateBodyError("support is undefined for the zero direction")
    return dirs


def _equal_weight_rank(weights: np.ndarray) -> int | None:
    w = float(weights[0])
    if float(weights.max() - weights.min()) > 1e-9 * w:
        return None
    target = 1.0 - MASS_TOL
    rank = int(np.ceil(target / w))
    while rank > 1 and (rank - 1) * w >= target:
        rank -= 1
    while rank * w < target:
        rank += 1
    return min(rank, len(weights))


def _greedy_chunk(positions: np.ndarray, weights: np.ndarray, dirs: np.ndarray, want_points: bool) -> tuple[np.ndarray, ...]:
    levels = positions @ dirs.T
    n_atoms, k = levels.shape
    rank = _equal_weight_rank(weights)
    if rank is not None:
        threshold = -np.partition(-levels, rank - 1, axis=0)[rank - 1]
    else:
        order = np.argsort(-levels, axis=0, kind="stable")
        cum = np.cumsum(weights[order], axis=0)
        first = np.argmax(cum >= 1.0 - MASS_TOL, axis=0)
        cols = np.arange(k)
        threshold = levels[order[first, cols], cols]
    band = LEVEL_TOL * np.maximum(1.0, np.abs(threshold))
    above_mask = levels > threshold + band
    above = above_mask.astype(float)
    at = (~above_mask & (levels >= threshold - band)).astype(float)
    mass_above = weights @ above
    mass_at = weights @ at
    frac = np.where(mass_at > 0, (1.0 - mass_above) / np.where(mass_at > 0, mass_at, 1.0), 0.0)
    frac = np.clip(frac, 0.0, 1.0)
    value = (weights[:, None] * levels * above).sum(axis=0) + frac * (weights[:, None] * levels * at).sum(axis=0)
    if not want_points:
        return threshold, mass_above, mass_at, value
    coeff = weights[:, None] * (above + frac[None, :] * at)
    points = coeff.T @ positions
    return threshold, mass_above, mass_at, value, points


def _greedy(m: Metronoid, thetas: Any, want_points: bool) -> tuple[np.ndarray, ...]:
    dirs = _direction_block(m, thetas)
    positions, weights = m.measure.positions, m.measure.weights
    chunk = max(1, min(MAX_CHUNK, CHUNK_ELEMENTS // max(1, len(weights))))
    starts = list(range(0, len(dirs), chunk))
    parts = parallel_map(lambda s: _greedy_chunk(positions, weights, dirs[s : s + chunk], want_points), starts)
    return tuple(np.concatenate([p[i] for p in parts], axis=0) for i in range(len(parts[0])))


def threshold(m: Metronoid, theta: Any) -> ThresholdResult:
    level, above, at, _ = _greedy(m, np.asarray(theta, dtype=float).reshape(1, -1), want_points=False)
    return ThresholdResult(level=float(level[0]), mass_above=float(above[0]), mass_at=float(at[0]))


def extreme_points(m: Metronoid, thetas: Any) -> np.ndarray:
    return _greedy(m, thetas, want_points=True)[4]


def extreme_point(m: Metronoid, theta: Any) -> np.ndarray:
    return extreme_points(m, np.asarray(theta, dtype=float).reshape(1, -1))[0]


def msupport_many(m: Metronoid, thetas: Any) -> np.ndarray:
    return _greedy(m, thetas, want_points=False)[3]


def msupport(m: Metronoid, theta: Any) -> float:
    return float(msupport_many(m, np.asarray(theta, dtype=float).reshape(1, -1))[0])


def support_lp(m: Metronoid, theta: Any) -> float:
    """max <sum lambda_i x_i, theta> over 0 <= lambda_i <= w_i, sum lambda_i = 1."""
    mu = m.measure
    objective = mu.positions @ np.asarray(theta, dtype=float)
    problem = LpProblem(objective, np.ones((1, len(mu))), np.ones(1), np.zeros(len(mu)), mu.weights, sense="max")
    return float(lp_solve(problem).objective)


def _boundary_net(m: Metronoid, net: DirectionNet | None) -> DirectionNet:
    return with_axes(net if net is not None else default_net(m.dim))


def _ray_exit_distance(m: Metronoid, point: np.ndarray, cap: float = 1.0) -> float:
    """How far point can move away from the barycenter and stay in M(mu), capped at ``cap``.

    The barycenter lies in the relative interior of M(mu), so a point of a
    full-dimensional M(mu) is on the boundary exactly when this distance is zero.
    """
    mu = m.measure
    step = point - m.barycenter
    length = float(np.linalg.norm(step))
    if length <= LEVEL_TOL:
        return np.inf
    n_atoms = len(mu)
    a_eq = np.zeros((m.dim + 1, n_atoms + 1))
    a_eq[: m.dim, :n_atoms] = mu.positions.T
    a_eq[: m.dim, n_atoms] = -step / length
    a_eq[m.dim, :n_atoms] = 1.0
    b_eq = np.concatenate([point, [1.0]])
    objective = np.zeros(n_atoms + 1)
    objective[n_atoms] = 1.0
    upper = np.concatenate([mu.weights, [cap]])
    result = lp_solve(LpProblem(objective, a_eq, b_eq, np.zeros(n_atoms + 1), upper, sense="max"))
    if result.status != "optimal":
        return 0.0
    return max(float(result.objective), 0.0)


def _is_flat(m: Metronoid) -> bool:
    positions = m.measure.positions
    if m.is_singleton:
        return True
    return int(np.linalg.matrix_rank(positions - positions[0], tol=LEVEL_TOL)) < m.dim


def membership(m: Metronoid, x: Any, net: DirectionNet | None = None, tol: float = BOUNDARY_TOL) -> MembershipCertificate:
    """LP feasibility of 0 <= lambda_i <= w_i, sum lambda_i = 1, sum lambda_i x_i = x.

    A feasible point is on the boundary when some net direction leaves at most tol
    of support slack, when the ray from the barycenter exits within tol of it,
    or when M(mu) is not full-dimensional.
    """
    mu = m.measure
    point = np.asarray(x, dtype=float).reshape(-1)
    if point.size != m.dim:
        raise DimensionMismatchError(f"query point in R^{point.size} for a metronoid in R^{m.dim}")
    n_atoms = len(mu)
    a_eq = np.vstack([mu.positions.T, np.ones((1, n_atoms))])
    b_eq = np.concatenate([point, [1.0]])
    problem = LpProblem(np.zeros(n_atoms), a_eq, b_eq, np.zeros(n_atoms), mu.weights, sense="max")
    result = lp_solve(problem)
    if result.status != "optimal":
        return MembershipCertificate(status="outside", coefficients=None, slack=None)
    dirs = _boundary_net(m, net).directions
    slack = float((msupport_many(m, dirs) - dirs @ point).min())
    on_boundary = slack <= tol or _is_flat(m) or _ray_exit_distance(m, point, cap=max(1.0, 2.0 * tol)) <= tol
    return MembershipCertificate(status="boundary" if on_boundary else "inside", coefficients=result.x, slack=slack)


def hull_zonotope_bounds(m: Metronoid, theta: Any) -> tuple[float, float, float]:
    mu = m.measure
    h_m = msupport(m, theta)
    h_conv = float(support_many(ConvexBody.vpolytope(mu.positions), np.asarray(theta, dtype=float)[None, :])[0])
    h_z = float(support_many(ConvexBody.zonotope_one_sided(mu.weights[:, None] * mu.positions), np.asarray(theta, dtype=float)[None, :])[0])
    return h_m, h_conv, h_z


def positive_part_integral_many(measure: DiscreteMeasure | Metronoid, thetas: Any) -> np.ndarray:
    mu = measure.measure if isinstance(measure, Metronoid) else measure
    dirs = np.atleast_2d(np.asarray(thetas, dtype=float))
    if len(mu) == 0:
        return np.zeros(len(dirs))
    return mu.weights @ np.maximum(mu.positions @ dirs.T, 0.0)


def positive_part_integral(measure: DiscreteMeasure | Metronoid, theta: Any) -> float:
    """Sum of w_i <x_i, theta> over atoms with positive level; bounds h_M(theta) from above."""
    return float(positive_part_integral_many(measure, np.asarray(theta, dtype=float).reshape(1, -1))[0])


def zonoid_support_symmetric_many(m: Metronoid, thetas: Any) -> np.ndarray:
    mu = m.measure
    if total_mass(mu) > 2.0 + MASS_TOL:
        raise PreconditionError("half-zonoid formula needs total mass <= 2")
    if origin_weight(mu) < 1.0 - MASS_TOL:
        raise PreconditionError("half-zonoid formula needs an origin atom of weight >= 1")
    if not is_symmetric_measure(mu):
        raise PreconditionError("half-zonoid formula needs a symmetric measure")
    dirs = _direction_block(m, thetas)
    return 0.5 * (mu.weights @ np.abs(mu.positions @ dirs.T))


def zonoid_support_symmetric(m: Metronoid, theta: Any) -> float:
    return float(zonoid_support_symmetric_many(m, np.asarray(theta, dtype=float).reshape(1, -1))[0])


def zonotope_equality_check(m: Metronoid, net: DirectionNet | None = None, tol: float = 1e-9) -> EqualityReport:
    """Compare h_M with the support of Z(w_1 x_1, ..., w_N x_N) on a net."""
    mu = m.measure
    dirs = (net if net is not None else default_net(m.dim)).directions
    h_m = msupport_many(m, dirs)
    h_z = np.maximum(mu.weights[:, None] * (mu.positions @ dirs.T), 0.0).sum(axis=0)
    gaps = np.abs(h_m - h_z)
    worst = int(np.argmax(gaps))
    equal = bool(gaps[worst] <= tol)
    return EqualityReport(equal=equal, worst_gap=float(gaps[worst]), witness=None if equal else dirs[worst].copy())
