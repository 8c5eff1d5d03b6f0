"""Monte Carlo volumes and half-space ratios with blocked, seed-keyed streams."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from typing import Any

import numpy as np
from scipy.integrate import trapezoid
from scipy.spatial import Delaunay, QhullError
from scipy.special import gammaln

from metronoids.errors import DegenerateBodyError, PreconditionError
from metronoids.geometry.bodies import bounding_box, contains_points, diameter, support
from metronoids.geometry.polygons import clip_halfplane, polygon_area, polygon_hull
from metronoids.models.contracts import ConvexBody, TailConvexityReport, VolumeEstimate
from metronoids.pipelines.parallel import parallel_map, rng_stream, split_counts

logger = logging.getLogger(__name__)

MC_BLOCKS = 64
CENTER_TOL = 0.01
RATIO_TAG = "halfspace_ratio"


def mean_abs_inner(n: int) -> float:
    """Integral of |<theta, e_1>| over the uniform probability on S^{n-1}."""
    if n < 1:
        raise PreconditionError("dimension must be >= 1")
    return math.exp(gammaln(n / 2.0) - gammaln((n + 1) / 2.0)) / math.sqrt(math.pi)


def mean_abs_inner_asymptotic(n: int) -> float:
    return math.sqrt(2.0 / (math.pi * n))


def centered_simplex(dim: int) -> ConvexBody:
    """conv(e_1, ..., e_n, -(1, ..., 1)); its vertex average is the origin."""
    return ConvexBody.vpolytope(np.vstack([np.eye(dim), -np.ones((1, dim))]))


def barycenter_exact(body: ConvexBody) -> np.ndarray:
    if body.is_symmetric:
        return np.zeros(body.dim)
    if body.kind == "zonotope_one_sided":
        return 0.5 * body.points.sum(axis=0)
    pts = body.points
    if body.dim == 1:
        return np.array([0.5 * (pts.min() + pts.max())])
    try:
        tri = Delaunay(pts)
    except QhullError as exc:
        raise DegenerateBodyError(f"V-polytope is not full-dimensional: {exc}") from exc
    simplices = pts[tri.simplices]
    edges = simplices[:, 1:, :] - simplices[:, :1, :]
    volumes = np.abs(np.linalg.det(edges))
    centroids = simplices.mean(axis=1)
    return (volumes @ centroids) / volumes.sum()


def require_centered(body: ConvexBody) -> None:
    offset = float(np.linalg.norm(barycenter_exact(body)))
    if offset > CENTER_TOL * diameter(body):
        raise PreconditionError(f"body is not centered: barycenter at distance {offset:.3g} from the origin")


def _box_blocks(body: ConvexBody, samples: int, seed: int, tag: str, blocks: int) -> list[tuple[int, np.ndarray]]:
    """Per block: number drawn and the inside points."""
    lo, hi = bounding_box(body)
    counts = split_counts(samples, blocks)

    def draw(block: int) -> tuple[int, np.ndarray]:
        rng = rng_stream(seed, tag, block)
        pts = lo + (hi - lo) * rng.random((counts[block], body.dim))
        return counts[block], pts[contains_points(body, pts)]

    return parallel_map(draw, range(blocks))


def volume_mc(body: ConvexBody, samples: int, seed: int, blocks: int = MC_BLOCKS) -> VolumeEstimate:
    if samples < 1:
        raise PreconditionError("sample count must be >= 1")
    lo, hi = bounding_box(body)
    box = float(np.prod(hi - lo))
    results = _box_blocks(body, samples, seed, "volume_mc", blocks)
    hits = sum(len(inside) for _, inside in results)
    p = hits / samples
    return VolumeEstimate(value=box * p, std_error=box * math.sqrt(p * (1.0 - p) / samples), samples=samples, seed=seed)


def _halfspace_fraction(body: ConvexBody, u: np.ndarray, level: float, samples: int, seed: int) -> tuple[float, float, int]:
    results = _box_blocks(body, samples, seed, RATIO_TAG, MC_BLOCKS)
    inside = sum(len(pts) for _, pts in results)
    if inside == 0:
        raise PreconditionError("no sample landed inside the body")
    above = sum(int(np.count_nonzero(pts @ u >= level)) for _, pts in results)
    p = above / inside
    return p, math.sqrt(p * (1.0 - p) / inside), inside


def _unit(body: ConvexBody, u: Any) -> np.ndarray:
    vec = np.asarray(u, dtype=float).reshape(-1)
    norm = float(np.linalg.norm(vec))
    if vec.size != body.dim or norm == 0.0:
        raise PreconditionError("direction must be a nonzero vector of the body's dimension")
    return vec / norm


def grunbaum_ratio(body: ConvexBody, u: Any, samples: int, seed: int) -> VolumeEstimate:
    """vol(K and <x,u> >= 0) / vol(K); at least 1/e for centered K."""
    require_centered(body)
    unit = _unit(body, u)
    p, err, inside = _halfspace_fraction(body, unit, 0.0, samples, seed)
    bound = 1.0 / math.e
    return VolumeEstimate(value=p, std_error=err, samples=inside, seed=seed, bound=bound, claimed_bound=bound)


def tail_bounds(dim: int, scale: float) -> tuple[float, float]:
    """(bound the cap integral yields, closed form as printed): exp(-1 - n/(R-1)) and exp(-1 - (n-1)/(R-1))."""
    if math.isinf(scale):
        return 1.0 / math.e, 1.0 / math.e
    return math.exp(-1.0 - dim / (scale - 1.0)), math.exp(-1.0 - (dim - 1) / (scale - 1.0))


def tail_volume_ratio(body: ConvexBody, u: Any, scale: float, samples: int, seed: int) -> VolumeEstimate:
    """vol(K and <x,u> >= h_K(u)/R) / vol(K); R = inf reduces to the Grunbaum ratio on the same samples."""
    if not scale > 1.0:
        raise PreconditionError("tail level needs R > 1")
    require_centered(body)
    unit = _unit(body, u)
    level = 0.0 if math.isinf(scale) else support(body, unit) / scale
    p, err, inside = _halfspace_fraction(body, unit, level, samples, seed)
    bound, claimed = tail_bounds(body.dim, scale)
    return VolumeEstimate(value=p, std_error=err, samples=inside, seed=seed, bound=bound, claimed_bound=claimed)


def tail_ratio_exact_2d(polygon: ConvexBody, u: Any, scale: float) -> float:
    """Clipping oracle for the planar tail ratio."""
    if polygon.kind != "vpolytope" or polygon.dim != 2:
        raise PreconditionError("the clipping oracle needs a planar V-polytope")
    unit = _unit(polygon, u)
    poly = polygon_hull(polygon.points)
    level = 0.0 if math.isinf(scale) else support(polygon, unit) / scale
    return polygon_area(clip_halfplane(poly, unit, level)) / polygon_area(poly)


def tail_convexity_check(
    profile: Callable[[np.ndarray], np.ndarray], scale: float, power: int, step: float = 1e-3
) -> TailConvexityReport:
    """Tail share of g(f) dominates that of g(line through (1, f(1)) and (R, 0)), g(t) = t**power."""
    if not scale > 1.0:
        raise PreconditionError("profile interval needs R > 1")
    if power < 1:
        raise PreconditionError("power must be a positive integer")
    head = np.linspace(0.0, 1.0, max(2, math.ceil(1.0 / step) + 1))
    tail = np.linspace(1.0, scale, max(2, math.ceil((scale - 1.0) / step) + 1))
    grid = np.concatenate([head, tail[1:]])
    values = np.asarray(profile(grid), dtype=float)
    if np.any(values < -1e-12):
        raise PreconditionError("profile must be nonnegative")
    slopes = np.diff(values) / np.diff(grid)
    if np.any(np.diff(slopes) > 1e-6 * max(1.0, float(np.abs(slopes).max()))):
        raise PreconditionError("profile is not concave on the sample grid")
    f_head = np.asarray(profile(head), dtype=float)
    f_tail = np.asarray(profile(tail), dtype=float)
    at_one = float(profile(np.array([1.0]))[0])

    def line(t: np.ndarray) -> np.ndarray:
        return at_one * (scale - t) / (scale - 1.0)

    def share(head_vals: np.ndarray, tail_vals: np.ndarray) -> float:
        tail_int = trapezoid(tail_vals**power, tail)
        total = trapezoid(head_vals**power, head) + tail_int
        return float(tail_int / total) if total > 0 else 0.0

    lhs = share(np.maximum(f_head, 0.0), np.maximum(f_tail, 0.0))
    rhs = share(line(head), line(tail))
    return TailConvexityReport(holds=lhs >= rhs - 1e-12, lhs=lhs, rhs=rhs)
