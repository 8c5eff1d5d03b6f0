"""Numerical search for cheap zonotope covers K inside Z(y_1, ..., y_m).

Each restart runs a projected subgradient walk on
sum ||y_i||_K + penalty * max_theta (h_K - h_Z)_+ with a random one-generator
perturbation per step. Iterates are pulled back onto the feasible set by a
positive rescaling, so every recorded cost belongs to a net-feasible cover.
The winner is rescaled exactly and re-verified before it is emitted.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.stats import special_ortho_group

from metronoids.engine.containment import contains_body
from metronoids.errors import DegenerateBodyError, LpError, PreconditionError
from metronoids.geometry.bodies import as_vpolytope, facets, gauge_gradient, gauge_many, support_many, vertex_array
from metronoids.geometry.directions import default_net, with_axes
from metronoids.geometry.tolerances import BOUNDARY_TOL
from metronoids.measures.discrete import transport_cost, zonotope_measure
from metronoids.models.contracts import Certificate, ConvexBody, DirectionNet, Metronoid, SearchResult
from metronoids.pipelines.parallel import parallel_map, rng_stream

logger = logging.getLogger(__name__)

SEARCH_TAG = "fvein_search"
MAX_SEARCH_DIM = 6
GENERATORS_PER_DIM = 8
STALL_LIMIT = 50
BASE_STEP = 0.1
JITTER = 0.05
EXACT_MARGIN = 1e-12
NET_MARGIN = 1e-6


def _one_sided_support(gens: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    return np.maximum(dirs @ gens.T, 0.0).sum(axis=1)


def _net_scale(gens: np.ndarray, dirs: np.ndarray, h_k: np.ndarray) -> float:
    """Smallest s with h_K <= s h_Z on the directions (inf when Z misses a direction)."""
    h_z = _one_sided_support(gens, dirs)
    if np.any(h_z <= 1e-15 * h_k):
        return math.inf
    return float((h_k / h_z).max())


def zonotope_cover_cost(
    generators: np.ndarray, body: ConvexBody, net: DirectionNet | None = None
) -> tuple[float, bool]:
    """(sum of ||y_i||_K, whether K sits inside Z(y)); polytopes are checked on their vertices."""
    if not body.is_symmetric:
        raise PreconditionError("zonotope covers are defined for symmetric bodies only")
    gens = np.atleast_2d(np.asarray(generators, dtype=float))
    cost = float(gauge_many(body, gens).sum())
    live = gens[np.linalg.norm(gens, axis=1) > 0]
    if len(live) == 0:
        return cost, False
    if body.is_polytope:
        try:
            worst = float(gauge_many(ConvexBody.zonotope_one_sided(live), vertex_array(body)).max())
        except (DegenerateBodyError, LpError):
            return cost, False
        return cost, worst <= 1.0 + 1e-9
    net = net if net is not None else default_net(body.dim)
    h_k = support_many(body, net.directions)
    return cost, bool(np.all(h_k <= _one_sided_support(live, net.directions) + BOUNDARY_TOL))


class _CoverProblem:
    """K-dependent pieces shared by every restart: cost, subgradient, net and vertices."""

    def __init__(self, body: ConvexBody, net: DirectionNet) -> None:
        self.body = as_vpolytope(body) if body.kind == "zonotope_symmetric" else body
        self.dirs = net.directions
        self.h_k = support_many(self.body, self.dirs)
        self.vertices = vertex_array(self.body) if self.body.is_polytope else None
        if self.body.kind == "vpolytope":
            normals, offsets = facets(self.body)
            self._scaled_normals = normals / offsets[:, None]

    def cost(self, gens: np.ndarray) -> float:
        if self.body.kind == "vpolytope":
            return float(np.maximum((gens @ self._scaled_normals.T).max(axis=1), 0.0).sum())
        return float(gauge_many(self.body, gens).sum())

    def gradient(self, gens: np.ndarray) -> np.ndarray:
        return gauge_gradient(self.body, gens)

    def exact_scale(self, gens: np.ndarray) -> float:
        if self.vertices is not None:
            try:
                zonotope = ConvexBody.zonotope_one_sided(gens)
                return float(gauge_many(zonotope, self.vertices).max()) * (1.0 + EXACT_MARGIN)
            except (DegenerateBodyError, LpError):
                return math.inf
        dirs = self.dirs
        if self.body.dim == 2:
            # h_Z is linear between the directions orthogonal to generators
            perp = np.column_stack([-gens[:, 1], gens[:, 0]])
            perp = perp[np.linalg.norm(perp, axis=1) > 0]
            perp /= np.linalg.norm(perp, axis=1)[:, None]
            dirs = np.vstack([dirs, perp, -perp])
        return _net_scale(gens, dirs, support_many(self.body, dirs)) * (1.0 + NET_MARGIN)


def _frames(n: int, count: int, restart: int, rng: np.random.Generator) -> list[np.ndarray]:
    if n == 1:
        return [np.eye(1)] * count
    if restart == 0:
        if n == 2:
            angles = [j * (math.pi / 2.0) / count for j in range(count)]
            return [np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]]) for a in angles]
        return [np.eye(n)] + [special_ortho_group.rvs(dim=n, random_state=rng) for _ in range(count - 1)]
    return [special_ortho_group.rvs(dim=n, random_state=rng) for _ in range(count)]


def _initial_generators(n: int, m: int, restart: int, rng: np.random.Generator) -> np.ndarray:
    """Signed axes of rotated cross-polytope frames, padded with random unit vectors."""
    frames = _frames(n, max(1, m // (2 * n)), restart, rng)
    rows = [sign * frame[:, i] for frame in frames for sign in (1.0, -1.0) for i in range(n)]
    gens = np.array(rows[:m])
    if len(gens) < m:
        extra = rng.standard_normal((m - len(gens), n))
        gens = np.vstack([gens, extra / np.linalg.norm(extra, axis=1)[:, None]])
    if restart > 0:
        gens = gens + JITTER * rng.standard_normal(gens.shape)
    return gens


def _run_restart(
    problem: _CoverProblem, n: int, m: int, seed: int, iterations: int, restart: int
) -> tuple[float, np.ndarray | None, list[float]]:
    rng = rng_stream(seed, SEARCH_TAG, restart)
    dirs, h_k = problem.dirs, problem.h_k
    current = _initial_generators(n, m, restart, rng)
    best: np.ndarray | None = None
    best_cost = math.inf
    history: list[float] = []
    scale = _net_scale(current, dirs, h_k)
    if math.isfinite(scale):
        current = scale * current
        best, best_cost = current.copy(), problem.cost(current)
        history.append(best_cost)
    penalty = 10.0 * n
    stall = 0
    for it in range(1, iterations + 1):
        reference = float(np.linalg.norm(current, axis=1).mean()) or 1.0
        step = BASE_STEP / math.sqrt(it) * reference
        grad = problem.gradient(current)
        proj = dirs @ current.T
        gap = h_k - np.maximum(proj, 0.0).sum(axis=1)
        worst = int(np.argmax(gap))
        if gap[worst] > -1e-9 * h_k[worst]:
            grad = grad - penalty * (proj[worst] > 0)[:, None] * dirs[worst]
        norm = float(np.linalg.norm(grad))
        trial = current - step * grad / norm if norm > 0 else current.copy()
        j = int(rng.integers(m))
        trial[j] += step * rng.standard_normal(n)
        scale = _net_scale(trial, dirs, h_k)
        improved = False
        if math.isfinite(scale):
            trial = scale * trial
            cost = problem.cost(trial)
            current = trial
            if cost < best_cost:
                best, best_cost, improved = trial.copy(), cost, True
        stall = 0 if improved else stall + 1
        if stall >= STALL_LIMIT:
            penalty *= 2.0
            stall = 0
            if best is not None:
                current = best.copy()
        if best is not None:
            history.append(best_cost)
    logger.debug("fvein restart %d: best cost %.6g after %d iterations", restart, best_cost, iterations)
    return best_cost, best, history


def _certify(body: ConvexBody, problem: _CoverProblem, gens: np.ndarray, net: DirectionNet) -> Certificate | None:
    scale = problem.exact_scale(gens)
    if not math.isfinite(scale):
        return None
    gens = scale * gens
    measure = zonotope_measure(gens)
    target = as_vpolytope(body) if body.is_polytope else body
    verified = contains_body(Metronoid(measure), target, net)
    kind = "exact" if verified.exact else "sampled"
    cert = Certificate(measure=measure, body=body, cost=transport_cost(measure, body), verified=verified, kind=kind)
    return cert if cert.valid else None


def fvein_search(
    body: ConvexBody,
    m: int,
    seed: int,
    iterations: int,
    restarts: int = 8,
    net: DirectionNet | None = None,
) -> SearchResult:
    n = body.dim
    if not body.is_symmetric:
        raise PreconditionError("fvein search needs a symmetric body")
    if n > MAX_SEARCH_DIM:
        raise PreconditionError(f"fvein search is limited to n <= {MAX_SEARCH_DIM}")
    if not 1 <= m <= GENERATORS_PER_DIM * n:
        raise PreconditionError(f"generator count must lie in [1, {GENERATORS_PER_DIM * n}]")
    if iterations < 1 or restarts < 1:
        raise PreconditionError("iterations and restarts must be >= 1")
    net = with_axes(net if net is not None else default_net(n))
    problem = _CoverProblem(body, net)

    runs = parallel_map(lambda r: _run_restart(problem, n, m, seed, iterations, r), range(restarts))
    order = sorted(range(restarts), key=lambda r: (runs[r][0], r))
    for r in order:
        cost, gens, history = runs[r]
        if gens is None:
            break
        cert = _certify(body, problem, gens, net)
        if cert is not None:
            logger.info("fvein search %s n=%d m=%d: cost %.6g from restart %d", body.kind, n, m, cert.cost, r)
            return SearchResult("PASSED", cert, tuple(history), r, restarts)
        logger.info("restart %d failed re-verification", r)
    return SearchResult("FAILED", None, (), None, restarts)
