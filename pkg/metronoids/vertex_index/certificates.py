from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from metronoids.constructions.builders import SAMPLED_TOL, sphere_construction
from metronoids.constructions.volumes import mean_abs_inner
from metronoids.engine.containment import contains_body
from metronoids.engine.metronoid import msupport_many, positive_part_integral_many
from metronoids.errors import DimensionMismatchError, PreconditionError
from metronoids.geometry.bodies import as_vpolytope
from metronoids.geometry.directions import default_net
from metronoids.measures.discrete import add_origin_atom, normalize_probability, symmetrize, transport_cost
from metronoids.models.contracts import (
    Certificate,
    ConvexBody,
    DirectionNet,
    DiscreteMeasure,
    EquivalenceReport,
    Metronoid,
)


def cross_polytope_measure(n: int) -> DiscreteMeasure:
    eye = np.eye(n)
    return DiscreteMeasure(np.vstack([eye, -eye]), np.ones(2 * n))


def cross_polytope_certificate(n: int, net: DirectionNet | None = None) -> Certificate:
    """sum_i (delta_{e_i} + delta_{-e_i}) generates exactly B_1^n; cost 2n."""
    if n < 1:
        raise PreconditionError("dimension must be >= 1")
    measure = cross_polytope_measure(n)
    body = ConvexBody.cross(n)
    verified = contains_body(Metronoid(measure), as_vpolytope(body), net)
    return Certificate(measure=measure, body=body, cost=transport_cost(measure, body), verified=verified, kind="exact")


def ball_certificate_cost(n: int) -> float:
    return 2.0 / mean_abs_inner(n)


def ball_certificate(
    n: int, count: int, seed: int, net: DirectionNet | None = None, tol: float = SAMPLED_TOL
) -> Certificate:
    """Sampled 2 sigma_R; containment is checked for the shrunken ball B(1 - tol)."""
    if n < 2:
        raise PreconditionError("ball certificate needs n >= 2")
    net = net if net is not None else default_net(n)
    report = sphere_construction(n, count, seed, net=net, tol=tol)
    verified = contains_body(Metronoid(report.measure), ConvexBody.ball(n, 1.0 - tol), net)
    return Certificate(measure=report.measure, body=ConvexBody.ball(n), cost=report.cost, verified=verified, kind="sampled")


def cross_polytope_lower_functional(mu: DiscreteMeasure, n: int) -> float:
    """Sum over the 2n signed axes of the positive-part integrals; at least 2n when B_1^n is contained."""
    if mu.dim != n:
        raise DimensionMismatchError(f"measure in R^{mu.dim}, expected R^{n}")
    eye = np.eye(n)
    return float(positive_part_integral_many(mu, np.vstack([eye, -eye])).sum())


def bm_transfer(cert: Certificate, distance: float) -> float:
    if distance < 1.0:
        raise PreconditionError("Banach-Mazur distances are >= 1")
    return distance * cert.cost


def ball_averaged_lower_bound(n: int) -> float:
    """Any mu with B_2^n inside M(mu) has integral of |x| at least 2 / mean_abs_inner(n)."""
    return 2.0 / mean_abs_inner(n)


def sphere_averaged_positive_part(mu: DiscreteMeasure, net: DirectionNet | None = None) -> float:
    net = net if net is not None else default_net(mu.dim)
    return float(positive_part_integral_many(mu, net.directions).mean())


def _project_body(body: ConvexBody, coords: list[int]) -> ConvexBody:
    k = len(coords)
    if body.is_analytic:
        return ConvexBody(body.kind, k, radius=body.radius)
    return ConvexBody(body.kind, k, points=body.points[:, coords])


def project_certificate(cert: Certificate, coords: Sequence[int], net: DirectionNet | None = None) -> tuple[Certificate, bool]:
    """Push the certificate through a coordinate projection; cost can only drop and containment survives."""
    picked = [int(c) for c in coords]
    n = cert.body.dim
    if not picked or len(set(picked)) != len(picked) or min(picked) < 0 or max(picked) >= n:
        raise PreconditionError(f"coordinates {picked} do not select a subspace of R^{n}")
    measure = DiscreteMeasure(cert.measure.positions[:, picked], cert.measure.weights)
    body = _project_body(cert.body, picked)
    target = body if body.kind in ("ball", "vpolytope") else as_vpolytope(body)
    verified = contains_body(Metronoid(measure), target, net)
    projected = Certificate(measure=measure, body=body, cost=transport_cost(measure, body), verified=verified, kind=cert.kind)
    return projected, projected.cost <= cert.cost * (1.0 + 1e-12) + 1e-12


def equivalence_pipeline(
    mu: DiscreteMeasure, body: ConvexBody, net: DirectionNet | None = None
) -> tuple[DiscreteMeasure, EquivalenceReport]:
    """Normalize to a probability, symmetrize, and check the half-centroid-body bridge."""
    if not body.is_symmetric:
        raise PreconditionError("equivalence pipeline needs a symmetric body")
    net = net if net is not None else default_net(mu.dim)
    target = body if body.kind in ("ball", "vpolytope") or not body.is_analytic else as_vpolytope(body)
    if not contains_body(Metronoid(mu), target, net).passed:
        raise PreconditionError("input measure does not generate a metronoid containing the body")
    nu = symmetrize(normalize_probability(mu))
    lifted = Metronoid(add_origin_atom(nu, 1.0))
    containment = contains_body(lifted, target, net)
    dirs = net.directions
    half_centroid = 0.5 * (nu.weights @ np.abs(nu.positions @ dirs.T))
    bridge = float(np.abs(msupport_many(lifted, dirs) - half_centroid).max())
    report = EquivalenceReport(
        containment=containment,
        cost_before=transport_cost(mu, body),
        cost_after=transport_cost(nu, body),
        bridge_gap=bridge,
    )
    return nu, report
