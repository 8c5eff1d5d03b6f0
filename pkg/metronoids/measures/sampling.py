from __future__ import annotations

import logging

import numpy as np

from metronoids.errors import PreconditionError, SamplingError
from metronoids.geometry.bodies import bounding_box, contains_points
from metronoids.models.contracts import ConvexBody, DiscreteMeasure, SamplerSpec
from metronoids.pipelines.parallel import parallel_map, rng_stream, split_counts

logger = logging.getLogger(__name__)

SAMPLE_BLOCKS = 16
MIN_ACCEPTANCE = 1e-4
ACCEPTANCE_PROBE = 100_000


def equal_weights(total: float, count: int) -> np.ndarray:
    """count equal weights whose float sum is exactly total; rounding goes into the last weight."""
    weights = np.full(count, total / count)
    for _ in range(4):
        gap = total - float(weights.sum())
        if gap == 0.0:
            break
        weights[-1] += gap
    return weights


def sample_sphere(spec: SamplerSpec) -> DiscreteMeasure:
    """count atoms on radius * S^{n-1}, each of weight total_mass / count."""
    if spec.variant != "sphere":
        raise PreconditionError("sample_sphere needs a sphere sampler spec")
    rng = rng_stream(spec.seed, "sample_sphere")
    gauss = rng.standard_normal((spec.count, spec.dim))
    norms = np.linalg.norm(gauss, axis=1)
    zero = norms == 0.0
    if np.any(zero):
        gauss[zero] = np.eye(spec.dim)[0]
        norms[zero] = 1.0
    positions = spec.radius * gauss / norms[:, None]
    weights = equal_weights(spec.total_mass, spec.count)
    return DiscreteMeasure(positions, weights)


def uniform_points_in_body(body: ConvexBody, count: int, seed: int, tag: str, blocks: int = SAMPLE_BLOCKS) -> np.ndarray:
    """Box-rejection samples, block k drawn from its own (seed, tag, k) stream."""
    lo, hi = bounding_box(body)
    counts = split_counts(count, blocks)

    def draw(block: int) -> np.ndarray:
        need = counts[block]
        if need == 0:
            return np.zeros((0, body.dim))
        rng = rng_stream(seed, tag, block)
        kept: list[np.ndarray] = []
        accepted = drawn = 0
        batch = max(1024, 2 * need)
        while accepted < need:
            cand = lo + (hi - lo) * rng.random((batch, body.dim))
            inside = cand[contains_points(body, cand)]
            kept.append(inside)
            accepted += len(inside)
            drawn += batch
            if drawn >= ACCEPTANCE_PROBE and accepted / drawn < MIN_ACCEPTANCE:
                raise SamplingError(
                    f"rejection acceptance rate {accepted / drawn:.2e} below {MIN_ACCEPTANCE:g} for {body.kind}"
                )
            rate = max(accepted / drawn, MIN_ACCEPTANCE)
            batch = int(min(max(1024, 1.2 * (need - accepted) / rate), 2_000_000))
        return np.vstack(kept)[:need]

    chunks = parallel_map(draw, range(blocks))
    return np.vstack(chunks)


def sample_body_uniform(spec: SamplerSpec) -> DiscreteMeasure:
    """Uniform atoms in scale * K with weights density_factor / count (total mass density_factor)."""
    if spec.variant != "body" or spec.body is None:
        raise PreconditionError("sample_body_uniform needs a body sampler spec")
    scaled = spec.body.scaled(spec.scale)
    logger.debug("sampling %d points uniformly in %.3g * %s", spec.count, spec.scale, spec.body.kind)
    positions = uniform_points_in_body(scaled, spec.count, spec.seed, "sample_body_uniform")
    weights = equal_weights(spec.density_factor, spec.count)
    return DiscreteMeasure(positions, weights)


def sample(spec: SamplerSpec) -> DiscreteMeasure:
    if spec.variant == "sphere":
        return sample_sphere(spec)
    return sample_body_uniform(spec)
