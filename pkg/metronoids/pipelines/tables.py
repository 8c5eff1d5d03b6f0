"""Reproducible experiment tables: d*/D* constructions, vertex-index costs, centroid energies."""

from __future__ import annotations

import logging
import math

from metronoids.constructions.builders import evaluate_dstar_Dstar, uniform_body_construction
from metronoids.constructions.volumes import mean_abs_inner
from metronoids.errors import PreconditionError
from metronoids.measures.discrete import transport_cost
from metronoids.models.contracts import ConvexBody, DStarRow
from metronoids.pipelines.parallel import parallel_map
from metronoids.vertex_index.centroid import centroid_energy, cross_family, sphere_family
from metronoids.vertex_index.certificates import ball_certificate_cost, cross_polytope_measure

logger = logging.getLogger(__name__)

SUITES = ("dstar", "fvein", "centroid-energy")
DEFAULT_COUNTS = {"dstar": 20_000, "fvein": 0, "centroid-energy": 10_000}

DSTAR_DIMS = (2, 3)
DSTAR_BODIES = ("cube", "cross")
FVEIN_DIMS = (1, 2, 3, 4, 5, 6, 7, 8, 10, 50, 100)
CENTROID_DIMS = (2, 3, 4, 5, 6, 7, 8)

Table = tuple[tuple[str, ...], list[list[object]]]


def dstar_table(seed: int, count: int) -> Table:
    cases = [(kind, n, R) for kind in DSTAR_BODIES for n in DSTAR_DIMS for R in sorted({2.0, float(n)})]

    def row(case: tuple[str, int, float]) -> list[object]:
        kind, n, scale = case
        body = ConvexBody(kind, n, radius=1.0)
        report = uniform_body_construction(body, scale, count, seed)
        return [kind, *evaluate_dstar_Dstar(report).as_row()]

    return ("body", *DStarRow.HEADER), parallel_map(row, cases)


def fvein_table() -> Table:
    rows: list[list[object]] = []
    for n in FVEIN_DIMS:
        exact = transport_cost(cross_polytope_measure(n), ConvexBody.cross(n))
        ball = ball_certificate_cost(n)
        reference = math.sqrt(2.0 * math.pi * n)
        rows.append([n, exact, ball, reference, ball / reference])
    return ("n", "cross_cost", "ball_cost", "sqrt_2pi_n", "ball_ratio"), rows


def centroid_energy_table(seed: int, count: int) -> Table:
    cases = [(n, family) for n in CENTROID_DIMS for family in ("cross", "sphere")]

    def row(case: tuple[int, str]) -> list[object]:
        n, family = case
        if family == "cross":
            energy, closed = centroid_energy(cross_family(n)), float(n)
        else:
            energy, closed = centroid_energy(sphere_family(n, count, seed)), 1.0 / mean_abs_inner(n)
        logger.debug("centroid energy n=%d %s: %.6g", n, family, energy)
        return [n, family, energy, closed, math.sqrt(n)]

    return ("n", "family", "energy", "closed_form", "sqrt_n"), parallel_map(row, cases)


def build_table(suite: str, seed: int, count: int | None = None) -> Table:
    if suite not in SUITES:
        raise PreconditionError(f"unknown table suite {suite!r}; choose one of {', '.join(SUITES)}")
    count = count or DEFAULT_COUNTS[suite]
    if suite == "dstar":
        return dstar_table(seed, count)
    if suite == "fvein":
        return fvein_table()
    return centroid_energy_table(seed, count)
