"""Exact planar extreme points of M(mu_delta), mu_delta the Lebesgue measure on K scaled by 1/delta."""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from metronoids.errors import DimensionMismatchError, PreconditionError
from metronoids.geometry.directions import default_net
from metronoids.geometry.polygons import cap_level, clip_halfplane, polygon_area, polygon_centroid, polygon_hull
from metronoids.geometry.tolerances import BOUNDARY_TOL
from metronoids.models.contracts import ConvexBody, DirectionNet, FloatingSandwichReport


def _polygon(body: ConvexBody) -> np.ndarray:
    if body.kind != "vpolytope" or body.dim != 2:
        raise DimensionMismatchError("cap computations need a planar V-polytope")
    poly = polygon_hull(body.points)
    if len(poly) < 3:
        raise PreconditionError("polygon has zero area")
    return poly


def _unit(theta: Any) -> np.ndarray:
    vec = np.asarray(theta, dtype=float).reshape(-1)
    norm = float(np.linalg.norm(vec))
    if vec.size != 2 or norm == 0.0:
        raise PreconditionError("cap direction must be a nonzero planar vector")
    return vec / norm


def cap_threshold(polygon: ConvexBody, delta: float, theta: Any) -> float:
    """R_delta(theta): the level whose upper cap has area delta."""
    poly = _polygon(polygon)
    area = polygon_area(poly)
    if not 0.0 < delta < area:
        raise PreconditionError(f"cap area {delta!r} must lie in (0, {area!r})")
    return cap_level(poly, _unit(theta), delta)


def uniform_cap_extreme_2d(polygon: ConvexBody, delta: float, theta: Any) -> np.ndarray:
    poly = _polygon(polygon)
    area = polygon_area(poly)
    if not 0.0 < delta < area:
        raise PreconditionError(f"cap area {delta!r} must lie in (0, {area!r})")
    unit = _unit(theta)
    level = cap_level(poly, unit, delta)
    return polygon_centroid(clip_halfplane(poly, unit, level))


def floating_sandwich_check(
    polygon: ConvexBody, delta: float, net: DirectionNet | None = None, tol: float = BOUNDARY_TOL
) -> FloatingSandwichReport:
    """R_delta(theta) <= <y_theta, theta> <= R_{delta/e}(theta) on every net direction."""
    poly = _polygon(polygon)
    net = net if net is not None else default_net(2)
    lower = upper = math.inf
    for theta in net.directions:
        level = cap_level(poly, theta, delta)
        centroid = polygon_centroid(clip_halfplane(poly, theta, level))
        inner = float(centroid @ theta)
        lower = min(lower, inner - level)
        upper = min(upper, cap_level(poly, theta, delta / math.e) - inner)
    ok = lower >= -tol and upper >= -tol
    return FloatingSandwichReport(
        status="PASSED" if ok else "FAILED", delta=delta, lower_slack=lower, upper_slack=upper, net_size=len(net)
    )
