"""Snap a measure to the dyadic grid and compare metronoids before/after.

Atoms land in half-open boxes a + [-h/2, h/2)^n with h = 2^-m; mass outside
[-R, R]^n goes to the origin atom and the result is dilated by 1/(1 - 2 eps).
"""

from __future__ import annotations

import math

import numpy as np

from metronoids.engine.metronoid import msupport_many
from metronoids.errors import DimensionMismatchError, PreconditionError
from metronoids.geometry.directions import default_net
from metronoids.measures.discrete import total_mass, transport_cost, truncate
from metronoids.models.contracts import (
    ConvexBody,
    DirectionNet,
    DiscreteMeasure,
    GridSandwichReport,
    GridSpec,
    Metronoid,
    TruncationReport,
)


def required_resolution(mass: float, eps: float, dim: int) -> int:
    """Smallest m with sqrt(n) * 2^-m <= eps / mass."""
    if mass <= 0:
        return 0
    return max(0, math.ceil(math.log2(math.sqrt(dim) * mass / eps)))


def check_grid_invariant(mu: DiscreteMeasure, grid: GridSpec) -> None:
    mass = total_mass(mu)
    if math.sqrt(mu.dim) * grid.spacing > grid.eps / mass * (1.0 + 1e-12):
        needed = required_resolution(mass, grid.eps, mu.dim)
        raise PreconditionError(
            f"grid cell diameter sqrt({mu.dim})/2^{grid.resolution} exceeds eps/mass = {grid.eps / mass:.6g}; "
            f"use resolution m >= {needed}"
        )


def snap_to_grid(mu: DiscreteMeasure, grid: GridSpec) -> DiscreteMeasure:
    """mu_m before the final dilation; total mass is unchanged."""
    h = grid.spacing
    k_max = math.floor(grid.range * 2**grid.resolution)
    keys = np.floor(mu.positions / h + 0.5).astype(np.int64)
    outside = np.any(np.abs(keys) > k_max, axis=1)
    keys[outside] = 0
    unique, inverse = np.unique(keys, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    weights = np.zeros(len(unique))
    np.add.at(weights, inverse, mu.weights)
    return DiscreteMeasure(unique.astype(float) * h, weights)


def discretize_grid(mu: DiscreteMeasure, grid: GridSpec) -> DiscreteMeasure:
    check_grid_invariant(mu, grid)
    snapped = snap_to_grid(mu, grid)
    return DiscreteMeasure(snapped.positions / (1.0 - 2.0 * grid.eps), snapped.weights)


def grid_sandwich_report(
    mu: DiscreteMeasure,
    grid: GridSpec,
    net: DirectionNet | None = None,
    body: ConvexBody | None = None,
    tol: float = 1e-12,
) -> GridSandwichReport:
    """Count directions violating (1 - 2 eps) h_mu <= h_{mu_m} <= (1 + 2 eps) h_mu."""
    check_grid_invariant(mu, grid)
    net = net if net is not None else default_net(mu.dim)
    if net.dim != mu.dim:
        raise DimensionMismatchError("net and measure dimensions differ")
    snapped = snap_to_grid(mu, grid)
    dirs = net.directions
    h_mu = msupport_many(Metronoid(mu), dirs)
    h_snap = msupport_many(Metronoid(snapped), dirs)
    lower_gap = h_snap - (1.0 - 2.0 * grid.eps) * h_mu
    upper_gap = (1.0 + 2.0 * grid.eps) * h_mu - h_snap
    lower_violations = int(np.count_nonzero(lower_gap < -tol))
    upper_violations = int(np.count_nonzero(upper_gap < -tol))
    cost = cost_bound = None
    if body is not None:
        cost = transport_cost(DiscreteMeasure(snapped.positions / (1.0 - 2.0 * grid.eps), snapped.weights), body)
        cost_bound = (transport_cost(mu, body) + grid.eps) / (1.0 - 2.0 * grid.eps)
    ok = lower_violations == 0 and upper_violations == 0 and (cost is None or cost <= cost_bound * (1.0 + 1e-12))
    return GridSandwichReport(
        status="PASSED" if ok else "FAILED",
        eps=grid.eps,
        lower_violations=lower_violations,
        upper_violations=upper_violations,
        worst_lower=float(lower_gap.min()),
        worst_upper=float(upper_gap.min()),
        cost=cost,
        cost_bound=cost_bound,
    )


def truncation_report(mu: DiscreteMeasure, radius: float, net: DirectionNet | None = None) -> TruncationReport:
    """Worst relative support gap between M(mu) and M(delta_0 + mu restricted to |x| >= radius)."""
    net = net if net is not None else default_net(mu.dim)
    truncated = truncate(mu, radius)
    dirs = net.directions
    h_mu = msupport_many(Metronoid(mu), dirs)
    h_trunc = msupport_many(Metronoid(truncated), dirs)
    rel = np.abs(h_trunc - h_mu) / np.maximum(np.abs(h_mu), 1e-12)
    worst = int(np.argmax(rel))
    return TruncationReport(
        radius=radius,
        worst_relative_gap=float(rel[worst]),
        witness=dirs[worst].copy(),
        kept_atoms=len(truncated) - 1,
    )
