"""Property suites behind ``metronoids verify``; each yields PASSED/FAILED findings with slacks."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable

import numpy as np

from metronoids.constructions.builders import sphere_construction
from metronoids.constructions.volumes import (
    centered_simplex,
    grunbaum_ratio,
    mean_abs_inner,
    tail_ratio_exact_2d,
    tail_volume_ratio,
)
from metronoids.engine.floating import floating_sandwich_check
from metronoids.engine.metronoid import hull_zonotope_bounds, msupport_many, support_lp, zonoid_support_symmetric_many
from metronoids.errors import PreconditionError
from metronoids.geometry.bodies import support_many
from metronoids.geometry.directions import default_net
from metronoids.measures.discrete import (
    add_origin_atom,
    concat,
    pushforward,
    radial_rescale,
    symmetrize,
    transport_cost,
    zonotope_measure,
)
from metronoids.measures.grid import grid_sandwich_report, required_resolution
from metronoids.measures.sampling import sample_body_uniform, sample_sphere
from metronoids.models.contracts import (
    ConvexBody,
    DiscreteMeasure,
    GridSpec,
    LinearMap,
    Metronoid,
    PropertyFinding,
    SamplerSpec,
)
from metronoids.pipelines.parallel import rng_stream
from metronoids.validators.property_rules import PropertyValidator, summarize_findings
from metronoids.vertex_index.centroid import centroid_energy, cross_family, sphere_family
from metronoids.vertex_index.certificates import (
    ball_certificate_cost,
    cross_polytope_certificate,
    cross_polytope_lower_functional,
    equivalence_pipeline,
)
from metronoids.vertex_index.search import fvein_search

logger = logging.getLogger(__name__)

DEFAULT_CASES = 200
MC_SAMPLES = 200_000
SPHERE_FAMILY_DIMS = (2, 3, 4, 5, 6, 7, 8)
SPHERE_CLOSED_FORM_DIMS = (2, 3)
SEARCH_ITERATIONS = 10_000
SEARCH_RESTARTS = 8
SEARCH_CASES: tuple[tuple[str, ConvexBody, int, float, float | None], ...] = (
    ("cross_2", ConvexBody.cross(2), 4, 4.2, 4.0),
    ("cross_3", ConvexBody.cross(3), 6, 6.3, 6.0),
    ("ball_2_m16", ConvexBody.ball(2), 16, 1.10 * math.pi, None),
)


def random_measure(rng: np.random.Generator, n: int, atoms: int) -> DiscreteMeasure:
    """Gaussian atoms with random weights rescaled to a total mass in [1, 3)."""
    positions = rng.standard_normal((atoms, n))
    weights = rng.uniform(0.05, 1.0, atoms)
    weights *= (1.0 + 2.0 * rng.random()) / weights.sum()
    return DiscreteMeasure(positions, weights)


def _unit_rows(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    dirs = rng.standard_normal((count, n))
    return dirs / np.linalg.norm(dirs, axis=1)[:, None]


def suite_metronoid(seed: int, cases: int, rules: PropertyValidator) -> list[PropertyFinding]:
    findings = []
    for case in range(cases):
        rng = rng_stream(seed, "verify_metronoid", case)
        n = int(rng.integers(1, 6))
        mu = random_measure(rng, n, int(rng.integers(1, 13)))
        m = Metronoid(mu)
        dirs = _unit_rows(rng, 50, n)
        greedy = msupport_many(m, dirs)
        lp = np.array([support_lp(m, theta) for theta in dirs])
        gap = np.abs(greedy - lp) / np.maximum(1.0, np.abs(lp))
        worst = int(np.argmax(gap))
        findings.append(rules.check_close("greedy_lp_agreement", lp[worst], greedy[worst], 1e-9 * max(1.0, abs(lp[worst]))))
    return findings


def suite_identities(seed: int, cases: int, rules: PropertyValidator) -> list[PropertyFinding]:
    findings = []
    for case in range(cases):
        rng = rng_stream(seed, "verify_identities", case)
        n = int(rng.integers(1, 5))
        mu = random_measure(rng, n, int(rng.integers(2, 10)))
        m = Metronoid(mu)
        dirs = _unit_rows(rng, 20, n)
        for theta in dirs[:5]:
            h_m, h_conv, h_z = hull_zonotope_bounds(m, theta)
            findings.append(rules.check_at_most("metronoid_below_hull", h_conv, h_m))
            findings.append(rules.check_at_most("metronoid_below_zonotope", h_z, h_m))

        half = DiscreteMeasure(mu.positions, mu.weights / mu.weights.sum())
        lifted = Metronoid(add_origin_atom(symmetrize(half), 1.0))
        gap = np.abs(msupport_many(lifted, dirs) - zonoid_support_symmetric_many(lifted, dirs)).max()
        findings.append(rules.check_close("half_zonoid_equality", 0.0, float(gap), 1e-10))

        gens = rng.standard_normal((int(rng.integers(1, 6)), n))
        bridge = Metronoid(zonotope_measure(gens))
        h_zon = support_many(ConvexBody.zonotope_one_sided(gens), dirs)
        findings.append(rules.check_close("zonotope_measure_bridge", 0.0, float(np.abs(msupport_many(bridge, dirs) - h_zon).max()), 1e-9))

        factors = 1.0 + 3.0 * rng.random(len(mu))
        rescaled = radial_rescale(mu, factors)
        findings.append(rules.check_close("rescale_cost_invariance", transport_cost(mu, ConvexBody.ball(n)), transport_cost(rescaled, ConvexBody.ball(n)), 1e-12 * max(1.0, transport_cost(mu, ConvexBody.ball(n)))))
        findings.append(rules.check_at_least("rescale_support_monotone", 0.0, float((msupport_many(Metronoid(rescaled), dirs) - msupport_many(m, dirs)).min()), 1e-12))

        matrix = rng.standard_normal((n, n)) + 2.0 * np.eye(n)
        transform = LinearMap(matrix)
        if transform.is_invertible:
            pushed = Metronoid(pushforward(transform, mu))
            lhs = msupport_many(pushed, dirs)
            rhs = msupport_many(m, dirs @ matrix)
            findings.append(rules.check_close("pushforward_support", 0.0, float(np.abs(lhs - rhs).max()), 1e-8))
    return findings


def suite_cross(seed: int, cases: int, rules: PropertyValidator) -> list[PropertyFinding]:
    findings = []
    per_dim = min(cases, 20)
    for n in range(1, 9):
        cert = cross_polytope_certificate(n)
        findings.append(rules.check_close("cross_certificate_cost", 2.0 * n, cert.cost, 1e-12))
        findings.append(rules.check_flag("cross_certificate_verified", cert.valid and cert.verified.exact))
        for case in range(per_dim):
            rng = rng_stream(seed, f"verify_cross_{n}", case)
            extra = random_measure(rng, n, int(rng.integers(1, 6)))
            mu = concat(cert.measure, extra)
            findings.append(rules.check_at_least("cross_lower_functional", 2.0 * n, cross_polytope_lower_functional(mu, n), 1e-5))
            findings.append(rules.check_at_least("cross_cost_lower_bound", 2.0 * n, transport_cost(mu, ConvexBody.cross(n)), 1e-5))
    return findings


def suite_ball(seed: int, cases: int, rules: PropertyValidator) -> list[PropertyFinding]:
    report = sphere_construction(2, 10_000, seed)
    findings = [
        rules.check_close("ball_certificate_cost", math.pi, ball_certificate_cost(2), 1e-12),
        rules.check_close("ball_sampled_cost", math.pi, report.cost, 1e-9),
        rules.check_at_most("ball_support_deviation", 0.02, report.support_deviation, 0.0),
    ]
    for n in (10, 50, 100):
        ratio = ball_certificate_cost(n) / math.sqrt(2.0 * math.pi * n)
        findings.append(rules.check_close("ball_cost_trend", 1.0, ratio, 0.05))
    _, equivalence = equivalence_pipeline(report.measure, ConvexBody.ball(2, 1.0 - 0.02))
    findings.append(rules.check_close("ball_equivalence_bridge", 0.0, equivalence.bridge_gap, 1e-10))
    return findings


def suite_grid(seed: int, cases: int, rules: PropertyValidator) -> list[PropertyFinding]:
    findings = []
    cube = ConvexBody.cube(2)
    samples = (
        ("cube", cube, sample_body_uniform(SamplerSpec("body", 2, 200, seed, body=cube, scale=2.0))),
        ("ball", ConvexBody.ball(2), sample_sphere(SamplerSpec("sphere", 2, 200, seed, radius=1.0, total_mass=2.0))),
    )
    for name, body, mu in samples:
        for eps in (0.05, 0.1):
            m = required_resolution(float(mu.weights.sum()), eps, 2)
            report = grid_sandwich_report(mu, GridSpec(range=3.0, resolution=m, eps=eps), body=body)
            evidence = float(report.lower_violations + report.upper_violations)
            findings.append(rules.check_flag(f"grid_sandwich_{name}", report.status == "PASSED", evidence))
            findings.append(rules.check_at_least(f"grid_sandwich_lower_{name}", 0.0, report.worst_lower, 1e-12))
            findings.append(rules.check_at_least(f"grid_sandwich_upper_{name}", 0.0, report.worst_upper, 1e-12))
    return findings


def _random_hexagon(seed: int) -> ConvexBody:
    rng = rng_stream(seed, "verify_hexagon")
    angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, 6))
    return ConvexBody.vpolytope(np.column_stack([np.cos(angles), np.sin(angles)]))


def suite_floating(seed: int, cases: int, rules: PropertyValidator) -> list[PropertyFinding]:
    findings = []
    square = ConvexBody.vpolytope([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
    for polygon, area in ((square, 4.0), (_random_hexagon(seed), None)):
        if area is None:
            pts = polygon.points
            area = 0.5 * abs(float(np.sum(pts[:, 0] * np.roll(pts[:, 1], -1) - np.roll(pts[:, 0], -1) * pts[:, 1])))
        for share in (0.05, 0.1, 0.2):
            report = floating_sandwich_check(polygon, share * area)
            findings.append(rules.check_at_least("floating_lower", 0.0, report.lower_slack, 1e-7))
            findings.append(rules.check_at_least("floating_upper", 0.0, report.upper_slack, 1e-7))
    return findings


def suite_tail(seed: int, cases: int, rules: PropertyValidator) -> list[PropertyFinding]:
    findings = []
    for n in (2, 3):
        for body in (centered_simplex(n), ConvexBody.ball(n)):
            u = np.ones(n) / math.sqrt(n)
            half = grunbaum_ratio(body, u, MC_SAMPLES, seed)
            findings.append(rules.check_at_least("grunbaum_ratio", half.bound, half.value, 3.0 * half.std_error))
            tail = tail_volume_ratio(body, u, 2.0, MC_SAMPLES, seed)
            findings.append(rules.check_at_least("tail_ratio", tail.bound, tail.value, 3.0 * tail.std_error))
            if n == 2 and body.kind == "vpolytope":
                exact = tail_ratio_exact_2d(body, u, 2.0)
                findings.append(rules.check_close("tail_exact_vs_mc", exact, tail.value, 3.0 * tail.std_error))
    return findings


def suite_centroid(seed: int, cases: int, rules: PropertyValidator) -> list[PropertyFinding]:
    findings = []
    for n in range(2, 9):
        energy = centroid_energy(cross_family(n))
        findings.append(rules.check_close("centroid_cross_energy", float(n), energy, 1e-9 * n))
        findings.append(rules.check_at_least("centroid_energy_sqrt_n", math.sqrt(n), energy, 0.0))
    for n in SPHERE_FAMILY_DIMS:
        energy = centroid_energy(sphere_family(n, 10_000, seed))
        closed = 1.0 / mean_abs_inner(n)
        if n in SPHERE_CLOSED_FORM_DIMS:
            findings.append(rules.check_close("centroid_sphere_closed_form", closed, energy, 0.02 * closed))
        findings.append(rules.check_at_least("centroid_energy_sqrt_n", math.sqrt(n), energy, 0.0))
    return findings


def suite_search(seed: int, cases: int, rules: PropertyValidator) -> list[PropertyFinding]:
    findings: list[PropertyFinding] = []
    for name, body, m, bound, optimum in SEARCH_CASES:
        result = fvein_search(body, m, seed, iterations=SEARCH_ITERATIONS, restarts=SEARCH_RESTARTS)
        cost = result.certificate.cost if result.certificate is not None else math.inf
        history = np.asarray(result.best_costs)
        findings.append(rules.check_at_most(f"fvein_{name}", bound, cost, 0.0))
        if optimum is not None:
            findings.append(rules.check_at_least(f"fvein_{name}_optimum", optimum, cost, optimum * 1e-9))
        findings.append(rules.check_flag(f"fvein_{name}_history_monotone", bool(np.all(np.diff(history) <= 0.0))))
    return findings


SUITES: dict[str, Callable[[int, int, PropertyValidator], list[PropertyFinding]]] = {
    "metronoid": suite_metronoid,
    "identities": suite_identities,
    "cross": suite_cross,
    "ball": suite_ball,
    "grid": suite_grid,
    "floating": suite_floating,
    "tail": suite_tail,
    "centroid": suite_centroid,
    "search": suite_search,
}


def run_verify(seed: int, suite: str = "all", cases: int = DEFAULT_CASES) -> dict[str, object]:
    if suite != "all" and suite not in SUITES:
        raise PreconditionError(f"unknown verify suite {suite!r}; choose 'all' or one of {', '.join(SUITES)}")
    names = list(SUITES) if suite == "all" else [suite]
    rules = PropertyValidator()
    findings: list[PropertyFinding] = []
    suites: dict[str, str] = {}
    for name in names:
        found = SUITES[name](seed, cases, rules)
        failed = sum(f.validation_status == "FAILED" for f in found)
        suites[name] = "FAILED" if failed else "PASSED"
        logger.info("verify suite %s: %d findings, %d failed", name, len(found), failed)
        findings.extend(found)
    report = summarize_findings(findings)
    report["suites"] = suites
    return report
