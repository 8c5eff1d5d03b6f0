from __future__ import annotations

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from metronoids.errors import PreconditionError
from metronoids.models.contracts import DirectionNet

DEFAULT_PLANAR_COUNT = 720
DEFAULT_SPHERE_COUNT = 2000


def exact_2d_angles(count: int) -> DirectionNet:
    if count < 1:
        raise PreconditionError("direction count must be >= 1")
    angles = 2.0 * np.pi * np.arange(count) / count
    dirs = np.column_stack([np.cos(angles), np.sin(angles)])
    return DirectionNet(dirs, generation="exact-2D-angles", count=count)


def low_discrepancy_sphere(dim: int, count: int, seed: int = 0) -> DirectionNet:
    """Scrambled Halton points pushed through the normal quantile and projected to the sphere."""
    if count < 1:
        raise PreconditionError("direction count must be >= 1")
    if dim == 1:
        dirs = np.where(np.arange(count) % 2 == 0, 1.0, -1.0).reshape(-1, 1)
        return DirectionNet(dirs, generation="low-discrepancy-sphere", count=count, seed=seed)
    sampler = qmc.Halton(d=dim, scramble=True, seed=np.random.default_rng(seed))
    uniform = np.clip(sampler.random(count), 1e-12, 1.0 - 1e-12)
    gauss = ndtri(uniform)
    norms = np.linalg.norm(gauss, axis=1, keepdims=True)
    gauss[norms[:, 0] == 0.0] = np.eye(dim)[0]
    dirs = gauss / np.linalg.norm(gauss, axis=1, keepdims=True)
    return DirectionNet(dirs, generation="low-discrepancy-sphere", count=count, seed=seed)


def default_net(dim: int, count: int | None = None, seed: int = 0) -> DirectionNet:
    if dim == 2:
        return exact_2d_angles(count or DEFAULT_PLANAR_COUNT)
    if dim == 1:
        return DirectionNet(np.array([[1.0], [-1.0]]), generation="low-discrepancy-sphere", count=2, seed=seed)
    return low_discrepancy_sphere(dim, count or DEFAULT_SPHERE_COUNT, seed)


def with_axes(net: DirectionNet) -> DirectionNet:
    """The net plus the 2n signed coordinate directions."""
    eye = np.eye(net.dim)
    dirs = np.vstack([net.directions, eye, -eye])
    return DirectionNet(dirs, generation=net.generation + "+axes", count=len(dirs), seed=net.seed)


def with_directions(net: DirectionNet, extra: np.ndarray) -> DirectionNet:
    extra = np.asarray(extra, dtype=float).reshape(-1, net.dim)
    norms = np.linalg.norm(extra, axis=1)
    extra = extra[norms > 0] / norms[norms > 0, None]
    dirs = np.vstack([net.directions, extra])
    return DirectionNet(dirs, generation=net.generation + "+extra", count=len(dirs), seed=net.seed)
