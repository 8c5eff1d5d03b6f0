"""Planar polygon helpers: hulls, shoelace area/centroid, half-plane clipping."""

from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from metronoids.errors import DimensionMismatchError, PreconditionError


def _unique_rows(points: np.ndarray, tol: float) -> np.ndarray:
    if len(points) == 0:
        return points
    scale = max(1.0, float(np.abs(points).max()))
    keys = np.round(points / (tol * scale)).astype(np.int64)
    _, idx = np.unique(keys, axis=0, return_index=True)
    return points[np.sort(idx)]


def polygon_hull(points: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Counter-clockwise hull vertices; degenerate inputs give one or two points."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DimensionMismatchError("polygon_hull expects points in R^2")
    pts = _unique_rows(pts, tol)
    if len(pts) <= 2:
        return pts
    try:
        hull = ConvexHull(pts)
    except QhullError:
        # collinear: keep the two ends of the segment
        direction = pts[-1] - pts[0]
        if np.linalg.norm(direction) == 0:
            direction = pts[1] - pts[0]
        proj = pts @ direction
        return pts[[int(np.argmin(proj)), int(np.argmax(proj))]]
    return pts[hull.vertices]


def polygon_area(poly: np.ndarray) -> float:
    if len(poly) < 3:
        return 0.0
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def polygon_centroid(poly: np.ndarray) -> np.ndarray:
    if len(poly) == 0:
        raise PreconditionError("empty polygon has no centroid")
    if len(poly) < 3:
        return poly.mean(axis=0)
    x, y = poly[:, 0], poly[:, 1]
    cross = x * np.roll(y, -1) - np.roll(x, -1) * y
    area = 0.5 * cross.sum()
    if abs(area) == 0.0:
        return poly.mean(axis=0)
    cx = np.sum((x + np.roll(x, -1)) * cross) / (6.0 * area)
    cy = np.sum((y + np.roll(y, -1)) * cross) / (6.0 * area)
    return np.array([cx, cy])


def clip_halfplane(poly: np.ndarray, theta: np.ndarray, level: float) -> np.ndarray:
    """Sutherland-Hodgman against the single edge <x, theta> >= level."""
    if len(poly) == 0:
        return poly
    values = poly @ theta - level
    out: list[np.ndarray] = []
    prev, prev_val = poly[-1], values[-1]
    for cur, cur_val in zip(poly, values):
        if cur_val >= 0:
            if prev_val < 0:
                t = prev_val / (prev_val - cur_val)
                out.append(prev + t * (cur - prev))
            out.append(cur)
        elif prev_val >= 0:
            t = prev_val / (prev_val - cur_val)
            out.append(prev + t * (cur - prev))
        prev, prev_val = cur, cur_val
    if not out:
        return np.zeros((0, 2))
    return np.array(out)


def cap_level(poly: np.ndarray, theta: np.ndarray, target: float, iterations: int = 200) -> float:
    """Level R with area{x in poly : <x, theta> >= R} == target, by bisection."""
    total = polygon_area(poly)
    if not 0.0 < target <= total:
        raise PreconditionError(f"cap area {target!r} outside (0, {total!r}]")
    proj = poly @ theta
    lo, hi = float(proj.min()), float(proj.max())
    if target >= total:
        return lo
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if polygon_area(clip_halfplane(poly, theta, mid)) >= target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, abs(lo)):
            break
    return 0.5 * (lo + hi)
