from __future__ import annotations

import logging
import math

import numpy as np

from metronoids.constructions.volumes import mean_abs_inner, require_centered
from metronoids.engine.containment import sandwich_check
from metronoids.engine.metronoid import msupport_many
from metronoids.errors import PreconditionError
from metronoids.geometry.bodies import support_many
from metronoids.geometry.directions import default_net
from metronoids.measures.discrete import total_mass, transport_cost
from metronoids.measures.sampling import sample_body_uniform, sample_sphere
from metronoids.models.contracts import (
    ConstructionReport,
    ConvexBody,
    DirectionNet,
    DStarRow,
    Metronoid,
    SamplerSpec,
)

logger = logging.getLogger(__name__)

SAMPLED_TOL = 2e-2


def john_position(body: ConvexBody) -> ConvexBody:
    """Rescale a ball, cube or cross-polytope so its minimal circumscribed ellipsoid is B_2^n."""
    n = body.dim
    if body.kind == "ball":
        return ConvexBody.ball(n, 1.0)
    if body.kind == "cross":
        return ConvexBody.cross(n, 1.0)
    if body.kind == "cube":
        return ConvexBody.cube(n, 1.0 / math.sqrt(n))
    raise PreconditionError(f"no John position known for {body.kind}; only ball, cube and cross are accepted")


def is_john_position(body: ConvexBody) -> bool:
    if body.kind not in ("ball", "cube", "cross"):
        return False
    return math.isclose(body.radius, john_position(body).radius, rel_tol=1e-12)


def sphere_construction(
    n: int,
    count: int,
    seed: int,
    body: ConvexBody | None = None,
    net: DirectionNet | None = None,
    tol: float = SAMPLED_TOL,
) -> ConstructionReport:
    """mu = 2 sigma_R with R = 1 / mean_abs_inner(n): mass 2, M(mu) close to B_2^n."""
    if count < n:
        raise PreconditionError("sphere construction needs count >= n")
    body = body if body is not None else ConvexBody.ball(n)
    if body.dim != n:
        raise PreconditionError("body dimension differs from n")
    if not is_john_position(body):
        raise PreconditionError("sphere construction accepts bodies in John position only")
    radius = 1.0 / mean_abs_inner(n)
    measure = sample_sphere(SamplerSpec("sphere", n, count, seed, radius=radius, total_mass=2.0))
    m = Metronoid(measure)
    net = net if net is not None else default_net(n)
    deviation = float(np.abs(msupport_many(m, net.directions) - 1.0).max())
    logger.info("sphere construction n=%d count=%d: max |h - 1| = %.3g", n, count, deviation)
    containment = sandwich_check(m, body, math.sqrt(n), net, tol)
    return ConstructionReport(
        body=body,
        scale=math.sqrt(n),
        measure=measure,
        mass=total_mass(measure),
        cost=transport_cost(measure, body),
        containment=containment,
        claimed_bounds=(2.0, 2.0 * radius * math.sqrt(n)),
        support_deviation=deviation,
    )


def uniform_body_construction(
    body: ConvexBody,
    scale: float,
    count: int,
    seed: int,
    net: DirectionNet | None = None,
    tol: float = SAMPLED_TOL,
) -> ConstructionReport:
    """Uniform measure on R K with total mass exp(1 + (n-1)/(R-1))."""
    n = body.dim
    if not 1.0 < scale <= max(n, 1):
        raise PreconditionError(f"construction needs 1 < R <= n, got R={scale!r} with n={n}")
    require_centered(body)
    spec = SamplerSpec("body", n, count, seed, body=body, scale=scale)
    measure = sample_body_uniform(spec)
    m = Metronoid(measure)
    net = net if net is not None else default_net(n)
    containment = sandwich_check(m, body, scale, net, tol)
    logger.info("uniform construction %s n=%d R=%g: %s", body.kind, n, scale, containment.status)
    mass_bound = spec.density_factor
    return ConstructionReport(
        body=body,
        scale=scale,
        measure=measure,
        mass=total_mass(measure),
        cost=transport_cost(measure, body),
        containment=containment,
        claimed_bounds=(mass_bound, scale * mass_bound),
        support_deviation=float((msupport_many(m, net.directions) / support_many(body, net.directions)).min()),
    )


def evaluate_dstar_Dstar(report: ConstructionReport) -> DStarRow:
    containment = report.containment
    return DStarRow(
        n=report.body.dim,
        R=report.scale,
        mass=report.mass,
        cost=report.cost,
        bound_mass=report.claimed_bounds[0],
        bound_cost=report.claimed_bounds[1],
        contain_lo=containment.inner.worst_slack,
        contain_hi=containment.outer_ratio,
        verdict=containment.status,
    )
