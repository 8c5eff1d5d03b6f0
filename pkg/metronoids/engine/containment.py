from __future__ import annotations

import math

import numpy as np

from metronoids.engine.metronoid import membership, msupport_many, positive_part_integral_many
from metronoids.engine.vertices import vertices, vertices_available
from metronoids.errors import DimensionMismatchError, PreconditionError
from metronoids.geometry.bodies import gauge_many, require_origin_interior, support_many, vertex_array
from metronoids.geometry.directions import default_net
from metronoids.geometry.tolerances import BOUNDARY_TOL
from metronoids.models.contracts import (
    ContainmentReport,
    ConvexBody,
    DirectionNet,
    Metronoid,
    SandwichReport,
    Status,
)


def _net_for(m: Metronoid, net: DirectionNet | None) -> DirectionNet:
    net = net if net is not None else default_net(m.dim)
    if net.dim != m.dim:
        raise DimensionMismatchError(f"direction net in R^{net.dim} for a metronoid in R^{m.dim}")
    return net


def _status(ok: bool) -> Status:
    return "PASSED" if ok else "FAILED"


def _contains_vertices(m: Metronoid, body: ConvexBody, net: DirectionNet, tol: float) -> ContainmentReport:
    dirs = net.directions
    h_m = msupport_many(m, dirs)
    verts = vertex_array(body)
    inside = True
    for vertex in verts:
        if not membership(m, vertex, net).contains:
            inside = False
    # net slack per vertex; the witness is the worst (vertex, direction) pair
    slack = h_m[None, :] - verts @ dirs.T
    v_idx, d_idx = np.unravel_index(int(np.argmin(slack)), slack.shape)
    worst = float(slack[v_idx, d_idx])
    return ContainmentReport(
        status=_status(inside),
        exact=True,
        method="vertex-membership",
        worst_slack=worst,
        witness=None if inside else dirs[d_idx].copy(),
        net_size=len(net),
        tolerance=tol,
    )


def contains_body(
    m: Metronoid, body: ConvexBody, net: DirectionNet | None = None, tol: float = BOUNDARY_TOL
) -> ContainmentReport:
    """K subset of M(mu): exact for V-polytopes, net-based otherwise."""
    if body.dim != m.dim:
        raise DimensionMismatchError(f"body in R^{body.dim} for a metronoid in R^{m.dim}")
    net = _net_for(m, net)
    if body.kind == "vpolytope":
        return _contains_vertices(m, body, net, tol)
    dirs = net.directions
    h_k = support_many(body, dirs)
    slack = msupport_many(m, dirs) - h_k
    screen = positive_part_integral_many(m, dirs) - h_k
    worst = int(np.argmin(slack))
    passed = bool(slack[worst] >= -tol)
    screen_ok = bool(screen.min() >= -tol)
    return ContainmentReport(
        status=_status(passed and screen_ok),
        exact=False,
        method="direction-net",
        worst_slack=float(slack[worst]),
        witness=None if passed else dirs[worst].copy(),
        net_size=len(net),
        tolerance=tol,
        screen_status=_status(screen_ok),
    )


def sandwich_check(
    m: Metronoid, body: ConvexBody, scale: float, net: DirectionNet | None = None, tol: float = BOUNDARY_TOL
) -> SandwichReport:
    """(1/R) M(mu) subset of K subset of M(mu); R = inf checks only the inner side."""
    if not scale >= 1.0:
        raise PreconditionError("sandwich factor R must be >= 1")
    net = _net_for(m, net)
    inner = contains_body(m, body, net, tol)
    if math.isinf(scale):
        return SandwichReport(
            status=inner.status, scale=scale, inner=inner, outer_status="SKIPPED", outer_ratio=None, outer_exact=False
        )
    require_origin_interior(body)
    dirs = net.directions
    ratio = float((msupport_many(m, dirs) / support_many(body, dirs)).max())
    outer_exact = vertices_available(m)
    if outer_exact:
        ratio = max(ratio, float(gauge_many(body, vertices(m)).max()))
    outer_ok = ratio <= scale + tol
    status = _status(inner.passed and outer_ok)
    return SandwichReport(
        status=status,
        scale=scale,
        inner=inner,
        outer_status=_status(outer_ok),
        outer_ratio=ratio,
        outer_exact=outer_exact,
    )
