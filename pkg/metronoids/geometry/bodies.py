"""Support and gauge oracles for every ConvexBody variant.

Analytic bodies use closed forms. V-polytopes and zonotopes answer gauge
queries through small linear programs; symmetric zonotopes with many
generators switch to the planar polygon (n = 2) or to an ascent on the
polar ratio <x, theta> / h_Z(theta) (n >= 3).
"""

from __future__ import annotations

import itertools
import logging
import math
import weakref
from typing import Any

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from metronoids.errors import (
    DegenerateBodyError,
    DimensionMismatchError,
    LpError,
    PreconditionError,
    UnsupportedPairError,
)
from metronoids.geometry.directions import low_discrepancy_sphere
from metronoids.geometry.lp import lp_solve
from metronoids.geometry.polygons import polygon_hull
from metronoids.models.contracts import ConvexBody, LpProblem

logger = logging.getLogger(__name__)

LP_GENERATOR_LIMIT = 200
ORIGIN_EPS = 1e-9
ASCENT_CHUNK = 256
ASCENT_ITERATIONS = 40
MAX_SIGN_ENUMERATION = 16

_facet_cache: "weakref.WeakKeyDictionary[ConvexBody, tuple[np.ndarray, np.ndarray]]" = weakref.WeakKeyDictionary()
_origin_cache: "weakref.WeakKeyDictionary[ConvexBody, bool]" = weakref.WeakKeyDictionary()


def _directions(body: ConvexBody, theta: Any) -> np.ndarray:
    dirs = np.atleast_2d(np.asarray(theta, dtype=float))
    if dirs.shape[1] != body.dim:
        raise DimensionMismatchError(f"direction in R^{dirs.shape[1]} for a body in R^{body.dim}")
    if np.any(np.all(dirs == 0.0, axis=1)):
        raise DegenerateBodyError("support is undefined for the zero direction")
    return dirs


def support_many(body: ConvexBody, thetas: Any) -> np.ndarray:
    dirs = _directions(body, thetas)
    if body.kind == "ball":
        return body.radius * np.linalg.norm(dirs, axis=1)
    if body.kind == "cube":
        return body.radius * np.abs(dirs).sum(axis=1)
    if body.kind == "cross":
        return body.radius * np.abs(dirs).max(axis=1)
    proj = body.points @ dirs.T
    if body.kind == "vpolytope":
        return proj.max(axis=0)
    if body.kind == "zonotope_one_sided":
        return np.maximum(proj, 0.0).sum(axis=0)
    return np.abs(proj).sum(axis=0)


def support(body: ConvexBody, theta: Any) -> float:
    vec = np.asarray(theta, dtype=float).reshape(-1)
    return float(support_many(body, vec[None, :])[0])


def bounding_box(body: ConvexBody) -> tuple[np.ndarray, np.ndarray]:
    n = body.dim
    if body.is_analytic:
        r = np.full(n, body.radius)
        return -r, r
    pts = body.points
    if body.kind == "vpolytope":
        return pts.min(axis=0), pts.max(axis=0)
    if body.kind == "zonotope_one_sided":
        return np.minimum(pts, 0.0).sum(axis=0), np.maximum(pts, 0.0).sum(axis=0)
    extent = np.abs(pts).sum(axis=0)
    return -extent, extent


def _origin_combination_feasible(points: np.ndarray) -> bool:
    m, n = points.shape
    a_eq = np.vstack([points.T, np.ones((1, m))])
    b_eq = np.concatenate([np.zeros(n), [1.0]])
    problem = LpProblem(np.zeros(m), a_eq, b_eq, np.full(m, ORIGIN_EPS), np.full(m, np.inf), sense="max")
    return lp_solve(problem).status == "optimal"


def origin_is_interior(body: ConvexBody) -> bool:
    if body.is_analytic:
        return True
    cached = _origin_cache.get(body)
    if cached is not None:
        return cached
    if not body.is_full_dimensional:
        result = False
    elif body.kind == "zonotope_symmetric":
        result = True
    else:
        # strictly positive weights writing 0 as a combination of the points
        result = _origin_combination_feasible(body.points)
    _origin_cache[body] = result
    return result


def require_origin_interior(body: ConvexBody) -> None:
    if not origin_is_interior(body):
        raise DegenerateBodyError(f"origin is not an interior point of the {body.kind}")


def facets(body: ConvexBody) -> tuple[np.ndarray, np.ndarray]:
    """H-form ``a_i . x <= b_i`` of a full-dimensional V-polytope, with b_i > 0 when 0 is interior."""
    if body.kind != "vpolytope":
        raise PreconditionError("facets are computed for V-polytopes only")
    cached = _facet_cache.get(body)
    if cached is not None:
        return cached
    pts = body.points
    if body.dim == 1:
        normals = np.array([[1.0], [-1.0]])
        offsets = np.array([pts.max(), -pts.min()])
    else:
        try:
            hull = ConvexHull(pts)
        except QhullError as exc:
            raise DegenerateBodyError(f"V-polytope is not full-dimensional: {exc}") from exc
        normals = hull.equations[:, :-1]
        offsets = -hull.equations[:, -1]
    _facet_cache[body] = (normals, offsets)
    return normals, offsets


def zonotope_vertices_2d(generators: Any, symmetric: bool = True) -> np.ndarray:
    """Counter-clockwise vertices of a planar zonotope from angle-sorted generators."""
    gens = np.asarray(generators, dtype=float).reshape(-1, 2)
    if not symmetric:
        return 0.5 * gens.sum(axis=0) + zonotope_vertices_2d(0.5 * gens, symmetric=True)
    gens = gens[np.linalg.norm(gens, axis=1) > 0]
    if len(gens) == 0:
        return np.zeros((1, 2))
    flip = (gens[:, 1] < 0) | ((gens[:, 1] == 0) & (gens[:, 0] < 0))
    gens = np.where(flip[:, None], -gens, gens)
    gens = gens[np.argsort(np.arctan2(gens[:, 1], gens[:, 0]), kind="stable")]
    merged = [gens[0].copy()]
    for g in gens[1:]:
        last = merged[-1]
        cross = last[0] * g[1] - last[1] * g[0]
        if abs(cross) <= 1e-12 * np.linalg.norm(last) * np.linalg.norm(g):
            merged[-1] = last + g
        else:
            merged.append(g.copy())
    steps = np.array(merged)
    start = -steps.sum(axis=0)
    walk = np.concatenate([2.0 * steps, -2.0 * steps])
    vertices = start + np.vstack([np.zeros((1, 2)), np.cumsum(walk, axis=0)[:-1]])
    return vertices


def _polygon_gauge(vertices: np.ndarray, points: np.ndarray) -> np.ndarray:
    if len(vertices) < 3:
        raise DegenerateBodyError("planar zonotope is not full-dimensional")
    edges = np.roll(vertices, -1, axis=0) - vertices
    normals = np.column_stack([edges[:, 1], -edges[:, 0]])
    offsets = np.einsum("ij,ij->i", normals, vertices)
    if np.any(offsets <= 0):
        raise DegenerateBodyError("origin is not an interior point of the zonotope")
    return np.maximum((points @ normals.T / offsets).max(axis=1), 0.0)


def _ascent_gauge(gens: np.ndarray, points: np.ndarray) -> np.ndarray:
    """gauge_Z(x) = max over theta of <x, theta> / h_Z(theta) for symmetric Z."""
    n = gens.shape[1]
    net = low_discrepancy_sphere(n, 512, seed=0).directions
    h_net = np.abs(gens @ net.T).sum(axis=0)
    if np.any(h_net <= 0):
        raise DegenerateBodyError("zonotope generators do not span the space")

    def h_of(theta: np.ndarray) -> np.ndarray:
        return np.abs(gens @ theta.T).sum(axis=0)

    out = np.zeros(len(points))
    for start in range(0, len(points), ASCENT_CHUNK):
        x = points[start : start + ASCENT_CHUNK]
        norms = np.linalg.norm(x, axis=1)
        live = norms > 0
        if not np.any(live):
            continue
        x = x[live]
        ratios = (x @ net.T) / h_net
        best = ratios.argmax(axis=1)
        theta = net[best].copy()
        value = ratios[np.arange(len(x)), best]
        radial = x / norms[live][:, None]
        radial_value = np.einsum("ij,ij->i", x, radial) / h_of(radial)
        use_radial = radial_value > value
        theta[use_radial] = radial[use_radial]
        value = np.maximum(value, radial_value)
        step = np.full(len(x), 0.5)
        for _ in range(ASCENT_ITERATIONS):
            proj = gens @ theta.T
            h = np.abs(proj).sum(axis=0)
            grad_h = np.sign(proj).T @ gens
            inner = np.einsum("ij,ij->i", x, theta)
            grad = (x * h[:, None] - inner[:, None] * grad_h) / (h * h)[:, None]
            grad -= np.einsum("ij,ij->i", grad, theta)[:, None] * theta
            gnorm = np.linalg.norm(grad, axis=1)
            gnorm[gnorm == 0] = 1.0
            cand = theta + step[:, None] * grad / gnorm[:, None]
            cand /= np.linalg.norm(cand, axis=1, keepdims=True)
            cand_value = np.einsum("ij,ij->i", x, cand) / h_of(cand)
            better = cand_value > value
            theta[better] = cand[better]
            value[better] = cand_value[better]
            step = np.where(better, step * 1.5, step * 0.5)
        chunk = np.zeros(len(norms))
        chunk[live] = np.maximum(value, 0.0)
        out[start : start + len(norms)] = chunk
    return out


def _gauge_lp(body: ConvexBody, x: np.ndarray) -> float:
    pts = body.points
    m, n = pts.shape
    objective = np.concatenate([[1.0], np.zeros(m)])
    a_eq = np.hstack([x.reshape(n, 1), -pts.T])
    b_eq = np.zeros(n)
    lower = np.zeros(m + 1)
    upper = np.full(m + 1, np.inf)
    if body.kind == "vpolytope":
        a_eq = np.vstack([a_eq, np.concatenate([[0.0], np.ones(m)])])
        b_eq = np.concatenate([b_eq, [1.0]])
    elif body.kind == "zonotope_one_sided":
        upper[1:] = 1.0
    else:
        lower[1:] = -1.0
        upper[1:] = 1.0
    result = lp_solve(LpProblem(objective, a_eq, b_eq, lower, upper, sense="max"))
    if result.status == "unbounded":
        return 0.0
    if result.status != "optimal":
        raise LpError(f"gauge LP for {body.kind} ended with status {result.status}")
    scale = float(result.objective)
    if scale <= 1e-12:
        raise DegenerateBodyError(f"origin is not an interior point of the {body.kind}")
    return 1.0 / scale


def gauge_many(body: ConvexBody, points: Any) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != body.dim:
        raise DimensionMismatchError(f"points in R^{pts.shape[1]} for a body in R^{body.dim}")
    if body.kind == "ball":
        return np.linalg.norm(pts, axis=1) / body.radius
    if body.kind == "cube":
        return np.abs(pts).max(axis=1) / body.radius
    if body.kind == "cross":
        return np.abs(pts).sum(axis=1) / body.radius
    require_origin_interior(body)
    if body.kind == "zonotope_symmetric" and len(body.points) > LP_GENERATOR_LIMIT:
        if body.dim == 2:
            return _polygon_gauge(zonotope_vertices_2d(body.points), pts)
        logger.debug("polar ascent gauge for %d points, %d generators", len(pts), len(body.points))
        return _ascent_gauge(body.points, pts)
    out = np.zeros(len(pts))
    for i, x in enumerate(pts):
        if np.any(x != 0.0):
            out[i] = _gauge_lp(body, x)
    return out


def gauge(body: ConvexBody, x: Any) -> float:
    vec = np.asarray(x, dtype=float).reshape(-1)
    return float(gauge_many(body, vec[None, :])[0])


def gauge_gradient(body: ConvexBody, points: Any) -> np.ndarray:
    """A subgradient of the gauge at each point (zero rows at the origin)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.zeros_like(pts)
    if body.kind == "ball":
        norms = np.linalg.norm(pts, axis=1)
        live = norms > 0
        out[live] = pts[live] / (norms[live, None] * body.radius)
        return out
    if body.kind == "cube":
        idx = np.abs(pts).argmax(axis=1)
        rows = np.arange(len(pts))
        out[rows, idx] = np.sign(pts[rows, idx]) / body.radius
        return out
    if body.kind == "cross":
        return np.sign(pts) / body.radius
    if body.kind == "vpolytope":
        require_origin_interior(body)
        normals, offsets = facets(body)
        scaled = normals / offsets[:, None]
        best = (pts @ scaled.T).argmax(axis=1)
        out = scaled[best].copy()
        out[np.all(pts == 0.0, axis=1)] = 0.0
        return out
    raise PreconditionError(f"no gauge subgradient for {body.kind}")


def contains_points(body: ConvexBody, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if body.kind == "vpolytope":
        normals, offsets = facets(body)
        slack = pts @ normals.T - offsets
        return (slack <= tol * np.maximum(1.0, np.abs(offsets))).all(axis=1)
    return gauge_many(body, pts) <= 1.0 + tol


def vertex_array(body: ConvexBody) -> np.ndarray:
    """Vertices of a polytopal body (cube up to 2^16 vertices, zonotopes by sign enumeration)."""
    n = body.dim
    if body.kind == "ball":
        raise PreconditionError("the Euclidean ball has no vertex list")
    if body.kind == "cube":
        if n > MAX_SIGN_ENUMERATION:
            raise PreconditionError(f"cube in R^{n} has too many vertices to list")
        return body.radius * np.array(list(itertools.product((-1.0, 1.0), repeat=n)))
    if body.kind == "cross":
        eye = np.eye(n)
        return body.radius * np.vstack([eye, -eye])
    pts = body.points
    if body.kind == "vpolytope":
        if n == 1:
            return np.array([[pts.min()], [pts.max()]])
        try:
            return pts[ConvexHull(pts).vertices]
        except QhullError:
            return pts
    symmetric = body.kind == "zonotope_symmetric"
    if n == 2:
        return zonotope_vertices_2d(pts, symmetric=symmetric)
    gens = pts[np.linalg.norm(pts, axis=1) > 0]
    if len(gens) > MAX_SIGN_ENUMERATION:
        raise PreconditionError(f"zonotope with {len(gens)} generators in R^{n} is too large to list")
    low = -1.0 if symmetric else 0.0
    corners = np.array(list(itertools.product((low, 1.0), repeat=len(gens)))) @ gens
    if n == 1:
        return np.array([[corners.min()], [corners.max()]])
    try:
        return corners[ConvexHull(corners).vertices]
    except QhullError:
        return np.unique(corners, axis=0)


def as_vpolytope(body: ConvexBody) -> ConvexBody:
    if body.kind == "vpolytope":
        return body
    return ConvexBody.vpolytope(vertex_array(body))


def planar_outline(body: ConvexBody) -> np.ndarray:
    if body.dim != 2:
        raise DimensionMismatchError("outline is defined for planar bodies")
    if body.kind == "ball":
        angles = 2.0 * np.pi * np.arange(360) / 360
        return body.radius * np.column_stack([np.cos(angles), np.sin(angles)])
    return polygon_hull(vertex_array(body))


def diameter(body: ConvexBody) -> float:
    n = body.dim
    if body.kind == "ball":
        return 2.0 * body.radius
    if body.kind == "cube":
        return 2.0 * body.radius * math.sqrt(n)
    if body.kind == "cross":
        return 2.0 * body.radius
    try:
        verts = vertex_array(body)
    except PreconditionError:
        lo, hi = bounding_box(body)
        return float(np.linalg.norm(hi - lo))
    diffs = verts[:, None, :] - verts[None, :, :]
    return float(np.sqrt((diffs**2).sum(axis=2)).max())


_BM_TABLE = {
    frozenset({"ball", "cross"}): lambda n: math.sqrt(n),
    frozenset({"ball", "cube"}): lambda n: math.sqrt(n),
}


def bm_known_distance(first: str, second: str, dim: int) -> float:
    """Closed-form Banach-Mazur distances; anything outside the table is refused."""
    if dim < 1:
        raise DimensionMismatchError("dimension must be >= 1")
    if first == second and first in ("ball", "cube", "cross"):
        return 1.0
    if dim == 1 and {first, second} <= {"ball", "cube", "cross"}:
        return 1.0
    formula = _BM_TABLE.get(frozenset({first, second}))
    if formula is None:
        raise UnsupportedPairError(f"Banach-Mazur distance for ({first}, {second}) is not in table")
    return float(formula(dim))
