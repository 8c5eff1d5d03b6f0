from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np

from metronoids.errors import (
    DimensionMismatchError,
    MassError,
    PreconditionError,
    SingularMapError,
)
from metronoids.geometry.tolerances import MASS_TOL, SINGULAR_DET_TOL, UNIT_TOL

BODY_KINDS = ("ball", "cube", "cross", "vpolytope", "zonotope_one_sided", "zonotope_symmetric")
ANALYTIC_KINDS = frozenset({"ball", "cube", "cross"})
POINT_KINDS = frozenset({"vpolytope", "zonotope_one_sided", "zonotope_symmetric"})

Status = Literal["PASSED", "FAILED", "SKIPPED"]
JSONDict = dict[str, Any]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def as_vector(values: Any, dim: int | None = None) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    if arr.size < 1:
        raise DimensionMismatchError("vectors need dimension n >= 1")
    if not np.all(np.isfinite(arr)):
        raise PreconditionError("vector coordinates must be finite")
    if dim is not None and arr.size != dim:
        raise DimensionMismatchError(f"expected a vector in R^{dim}, got R^{arr.size}")
    return _frozen(arr)


def as_points(values: Any, dim: int | None = None) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim == 1 and dim is not None and arr.size == 0:
        arr = arr.reshape(0, dim)
    if arr.ndim != 2:
        raise DimensionMismatchError("point lists must be two-dimensional arrays")
    if dim is not None and arr.shape[1] != dim:
        raise DimensionMismatchError(f"expected points in R^{dim}, got R^{arr.shape[1]}")
    if arr.shape[1] < 1:
        raise DimensionMismatchError("points need dimension n >= 1")
    if not np.all(np.isfinite(arr)):
        raise PreconditionError("point coordinates must be finite")
    return _frozen(arr)


@dataclass(frozen=True, eq=False)
class ConvexBody:
    """Analytic body, V-polytope or zonotope with support and gauge oracles (see geometry.bodies)."""

    kind: str
    dim: int
    radius: float | None = None
    points: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.kind not in BODY_KINDS:
            raise PreconditionError(f"unknown body type {self.kind!r}")
        if self.dim < 1:
            raise DimensionMismatchError("bodies need dimension n >= 1")
        if self.kind in ANALYTIC_KINDS:
            if self.radius is None or not math.isfinite(self.radius) or self.radius <= 0:
                raise PreconditionError(f"{self.kind} needs a finite radius > 0")
            object.__setattr__(self, "radius", float(self.radius))
            object.__setattr__(self, "points", None)
        else:
            if self.points is None:
                raise PreconditionError(f"{self.kind} needs a point list")
            pts = as_points(self.points, self.dim)
            if pts.shape[0] == 0:
                raise PreconditionError(f"{self.kind} needs at least one point")
            object.__setattr__(self, "points", pts)
            object.__setattr__(self, "radius", None)

    @classmethod
    def ball(cls, dim: int, radius: float = 1.0) -> ConvexBody:
        return cls("ball", dim, radius=radius)

    @classmethod
    def cube(cls, dim: int, radius: float = 1.0) -> ConvexBody:
        return cls("cube", dim, radius=radius)

    @classmethod
    def cross(cls, dim: int, radius: float = 1.0) -> ConvexBody:
        return cls("cross", dim, radius=radius)

    @classmethod
    def vpolytope(cls, vertices: Any) -> ConvexBody:
        pts = np.array(vertices, dtype=float)
        return cls("vpolytope", int(pts.shape[1]), points=pts)

    @classmethod
    def zonotope_one_sided(cls, generators: Any) -> ConvexBody:
        pts = np.array(generators, dtype=float)
        return cls("zonotope_one_sided", int(pts.shape[1]), points=pts)

    @classmethod
    def zonotope_symmetric(cls, generators: Any) -> ConvexBody:
        pts = np.array(generators, dtype=float)
        return cls("zonotope_symmetric", int(pts.shape[1]), points=pts)

    @property
    def is_analytic(self) -> bool:
        return self.kind in ANALYTIC_KINDS

    @property
    def is_polytope(self) -> bool:
        return self.kind != "ball"

    @property
    def is_full_dimensional(self) -> bool:
        if self.is_analytic:
            return True
        pts = self.points
        if self.kind != "vpolytope":
            return int(np.linalg.matrix_rank(pts)) == self.dim
        if pts.shape[0] < self.dim + 1:
            return False
        return int(np.linalg.matrix_rank(pts[1:] - pts[0])) == self.dim

    @property
    def is_symmetric(self) -> bool:
        if self.kind in ANALYTIC_KINDS or self.kind == "zonotope_symmetric":
            return True
        if self.kind == "zonotope_one_sided":
            return False
        pts = self.points
        scale = max(1.0, float(np.abs(pts).max()))
        gaps = np.abs(pts[:, None, :] + pts[None, :, :]).max(axis=2).min(axis=1)
        return bool(np.all(gaps <= 1e-9 * scale))

    def scaled(self, factor: float) -> ConvexBody:
        if factor <= 0:
            raise PreconditionError("scale factor must be positive")
        if self.is_analytic:
            return ConvexBody(self.kind, self.dim, radius=self.radius * factor)
        return ConvexBody(self.kind, self.dim, points=self.points * factor)

    def to_dict(self) -> JSONDict:
        payload: JSONDict = {"type": self.kind, "dim": self.dim}
        if self.is_analytic:
            payload["radius"] = self.radius
        else:
            payload["points"] = self.points.tolist()
        return payload


@dataclass(frozen=True, eq=False)
class LinearMap:
    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.array(self.matrix, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
            raise DimensionMismatchError("linear maps are square n x n matrices")
        if not np.all(np.isfinite(mat)):
            raise PreconditionError("matrix entries must be finite")
        object.__setattr__(self, "matrix", _frozen(mat))

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def is_invertible(self) -> bool:
        return abs(float(np.linalg.det(self.matrix))) > SINGULAR_DET_TOL

    def require_invertible(self) -> None:
        if not self.is_invertible:
            det = float(np.linalg.det(self.matrix))
            raise SingularMapError(f"linear map is singular (det={det:.3e})")

    def inverse(self) -> LinearMap:
        self.require_invertible()
        return LinearMap(np.linalg.inv(self.matrix))

    def transpose(self) -> LinearMap:
        return LinearMap(self.matrix.T.copy())

    def apply(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        if pts.shape[-1] != self.dim:
            raise DimensionMismatchError(f"map acts on R^{self.dim}, got R^{pts.shape[-1]}")
        return pts @ self.matrix.T

    @classmethod
    def identity(cls, dim: int) -> LinearMap:
        return cls(np.eye(dim))

    @classmethod
    def scaling(cls, dim: int, factor: float) -> LinearMap:
        return cls(factor * np.eye(dim))


@dataclass(frozen=True, eq=False)
class LpProblem:
    """Linear program over equality constraints and per-variable bounds.

    Lower bounds may be ``-inf`` and upper bounds ``+inf``. ``sense`` is
    ``"max"`` or ``"min"``.
    """

    objective: np.ndarray
    a_eq: np.ndarray
    b_eq: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    sense: str = "max"

    def __post_init__(self) -> None:
        c = np.array(self.objective, dtype=float).reshape(-1)
        k = c.size
        a = np.array(self.a_eq, dtype=float)
        if a.size == 0:
            a = a.reshape(0, k)
        b = np.array(self.b_eq, dtype=float).reshape(-1)
        lo = np.array(self.lower, dtype=float).reshape(-1)
        hi = np.array(self.upper, dtype=float).reshape(-1)
        if a.ndim != 2 or a.shape[1] != k or a.shape[0] != b.size:
            raise DimensionMismatchError("constraint matrix, rhs and objective disagree in shape")
        if lo.size != k or hi.size != k:
            raise DimensionMismatchError("bounds must list one value per variable")
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)) or np.any(lo == np.inf) or np.any(hi == -np.inf):
            raise PreconditionError("bounds must be numbers or unbounded markers")
        if np.any(lo > hi):
            raise PreconditionError("lower bound exceeds upper bound")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise PreconditionError("objective and constraints must be finite")
        if self.sense not in ("max", "min"):
            raise PreconditionError("sense must be 'max' or 'min'")
        for name, value in (("objective", c), ("a_eq", a), ("b_eq", b), ("lower", lo), ("upper", hi)):
            object.__setattr__(self, name, _frozen(value))


@dataclass(frozen=True, eq=False)
class LpResult:
    status: str
    x: np.ndarray | None
    objective: float | None
    iterations: int = 0


@dataclass(frozen=True, eq=False)
class DirectionNet:
    directions: np.ndarray
    generation: str
    count: int
    seed: int | None = None

    def __post_init__(self) -> None:
        dirs = as_points(self.directions)
        norms = np.linalg.norm(dirs, axis=1)
        if np.any(np.abs(norms - 1.0) > UNIT_TOL):
            raise PreconditionError("direction nets hold unit vectors only")
        object.__setattr__(self, "directions", dirs)

    @property
    def dim(self) -> int:
        return int(self.directions.shape[1])

    def __len__(self) -> int:
        return int(self.directions.shape[0])


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Finite list of weighted atoms ``sum w_i delta_{x_i}`` in R^n."""

    positions: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        pts = as_points(self.positions)
        w = np.array(self.weights, dtype=float).reshape(-1)
        if w.size != pts.shape[0]:
            raise DimensionMismatchError("one weight per atom is required")
        if not np.all(np.isfinite(w)):
            raise MassError("atom weights must be finite")
        if np.any(w <= 0):
            raise MassError("atom weights must be positive")
        object.__setattr__(self, "positions", pts)
        object.__setattr__(self, "weights", _frozen(w))

    @property
    def dim(self) -> int:
        return int(self.positions.shape[1])

    def __len__(self) -> int:
        return int(self.weights.size)

    @classmethod
    def from_atoms(cls, atoms: list[tuple[Any, float]], dim: int | None = None) -> DiscreteMeasure:
        if not atoms:
            if dim is None:
                raise DimensionMismatchError("an empty measure needs an explicit dimension")
            return cls(np.zeros((0, dim)), np.zeros(0))
        return cls(np.array([a[0] for a in atoms], dtype=float), np.array([a[1] for a in atoms], dtype=float))

    @classmethod
    def empty(cls, dim: int) -> DiscreteMeasure:
        return cls(np.zeros((0, dim)), np.zeros(0))

    def to_dict(self) -> JSONDict:
        return {
            "dim": self.dim,
            "atoms": [{"x": x.tolist(), "w": float(w)} for x, w in zip(self.positions, self.weights)],
        }


@dataclass(frozen=True, eq=False)
class SamplerSpec:
    """Either ``sphere`` (uniform on radius * S^{n-1}) or ``body`` (uniform on scale * K)."""

    variant: str
    dim: int
    count: int
    seed: int
    radius: float = 1.0
    total_mass: float = 1.0
    body: ConvexBody | None = None
    scale: float = 2.0
    density_factor: float | None = None

    def __post_init__(self) -> None:
        if self.variant not in ("sphere", "body"):
            raise PreconditionError("sampler variant must be 'sphere' or 'body'")
        if self.count < 1:
            raise PreconditionError("sampler count must be >= 1")
        if self.variant == "sphere":
            if self.radius <= 0 or self.total_mass <= 0:
                raise PreconditionError("sphere sampler needs radius > 0 and total_mass > 0")
        else:
            if self.body is None:
                raise PreconditionError("body sampler needs a body")
            if self.body.dim != self.dim:
                raise DimensionMismatchError("sampler dimension differs from the body's")
            if self.scale <= 1:
                raise PreconditionError("body sampler needs scale R > 1")
            if self.density_factor is None:
                exponent = 1.0 + (self.dim - 1) / (self.scale - 1.0)
                if exponent > 700.0:
                    raise PreconditionError(f"scale R={self.scale!r} is too close to 1: density factor overflows")
                object.__setattr__(self, "density_factor", math.exp(exponent))
            elif self.density_factor <= 0:
                raise PreconditionError("density factor must be positive")


@dataclass(frozen=True)
class GridSpec:
    range: float
    resolution: int
    eps: float

    def __post_init__(self) -> None:
        if not self.range > 0:
            raise PreconditionError("grid range must be positive")
        if self.resolution < 0:
            raise PreconditionError("grid resolution must be a nonnegative integer")
        if not 0 < self.eps < 0.25:
            raise PreconditionError("grid epsilon must lie in (0, 1/4)")

    @property
    def spacing(self) -> float:
        return 2.0 ** (-self.resolution)


@dataclass(frozen=True, eq=False)
class Metronoid:
    """M(mu) for a discrete measure of total mass >= 1."""

    measure: DiscreteMeasure

    def __post_init__(self) -> None:
        require_mass_at_least_one(self.total_mass)

    @property
    def dim(self) -> int:
        return self.measure.dim

    @property
    def total_mass(self) -> float:
        return float(self.measure.weights.sum())

    @property
    def is_singleton(self) -> bool:
        return abs(self.total_mass - 1.0) <= MASS_TOL

    @property
    def barycenter(self) -> np.ndarray:
        return (self.measure.weights @ self.measure.positions) / self.total_mass


@dataclass(frozen=True)
class ThresholdResult:
    level: float
    mass_above: float
    mass_at: float


@dataclass(frozen=True, eq=False)
class MembershipCertificate:
    status: str
    coefficients: np.ndarray | None
    slack: float | None = None

    @property
    def contains(self) -> bool:
        return self.status in ("inside", "boundary")


@dataclass(frozen=True, eq=False)
class ContainmentReport:
    status: Status
    exact: bool
    method: str
    worst_slack: float
    witness: np.ndarray | None
    net_size: int
    tolerance: float
    screen_status: Status = "PASSED"

    @property
    def passed(self) -> bool:
        return self.status == "PASSED"


@dataclass(frozen=True, eq=False)
class SandwichReport:
    status: Status
    scale: float
    inner: ContainmentReport
    outer_status: Status
    outer_ratio: float | None
    outer_exact: bool

    @property
    def passed(self) -> bool:
        return self.status == "PASSED"


@dataclass(frozen=True, eq=False)
class EqualityReport:
    equal: bool
    worst_gap: float
    witness: np.ndarray | None

    def __bool__(self) -> bool:
        return self.equal


@dataclass(frozen=True, eq=False)
class GridSandwichReport:
    status: Status
    eps: float
    lower_violations: int
    upper_violations: int
    worst_lower: float
    worst_upper: float
    cost: float | None = None
    cost_bound: float | None = None


@dataclass(frozen=True, eq=False)
class TruncationReport:
    radius: float
    worst_relative_gap: float
    witness: np.ndarray | None
    kept_atoms: int


@dataclass(frozen=True)
class FloatingSandwichReport:
    status: Status
    delta: float
    lower_slack: float
    upper_slack: float
    net_size: int


@dataclass(frozen=True)
class VolumeEstimate:
    value: float
    std_error: float
    samples: int
    seed: int
    bound: float | None = None
    claimed_bound: float | None = None

    @property
    def meets_bound(self) -> bool:
        return self.bound is None or self.value >= self.bound - 3.0 * self.std_error


@dataclass(frozen=True)
class TailConvexityReport:
    holds: bool
    lhs: float
    rhs: float

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True, eq=False)
class ConstructionReport:
    body: ConvexBody
    scale: float
    measure: DiscreteMeasure
    mass: float
    cost: float
    containment: SandwichReport
    claimed_bounds: tuple[float, float]
    support_deviation: float | None = None


@dataclass(frozen=True)
class DStarRow:
    n: int
    R: float
    mass: float
    cost: float
    bound_mass: float
    bound_cost: float
    contain_lo: float
    contain_hi: float
    verdict: str

    HEADER = ("n", "R", "mass", "cost", "bound_mass", "bound_cost", "contain_lo", "contain_hi", "verdict")

    def as_row(self) -> list[object]:
        return [getattr(self, name) for name in self.HEADER]


@dataclass(frozen=True, eq=False)
class Certificate:
    measure: DiscreteMeasure
    body: ConvexBody
    cost: float
    verified: ContainmentReport
    kind: str

    @property
    def valid(self) -> bool:
        return self.verified.passed


@dataclass(frozen=True, eq=False)
class CentroidBody:
    generators: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "generators", as_points(self.generators))

    @property
    def body(self) -> ConvexBody:
        return ConvexBody.zonotope_symmetric(self.generators)


@dataclass(frozen=True, eq=False)
class EquivalenceReport:
    containment: ContainmentReport
    cost_before: float
    cost_after: float
    bridge_gap: float
    tolerance: float = 1e-10

    @property
    def cost_gap(self) -> float:
        return abs(self.cost_after - self.cost_before)

    @property
    def passed(self) -> bool:
        return (
            self.containment.passed
            and self.cost_gap <= 1e-9 * max(1.0, abs(self.cost_before))
            and self.bridge_gap <= self.tolerance
        )


@dataclass(frozen=True, eq=False)
class SearchResult:
    status: str
    certificate: Certificate | None
    best_costs: tuple[float, ...]
    restart: int | None
    restarts: int


@dataclass(frozen=True)
class PropertyFinding:
    validation_status: str
    rule: str
    expected: float | None
    actual: float | None
    slack: float | None
    tolerance: float
    severity: str
    message: str


@dataclass(frozen=True)
class RunConfig:
    command: str
    seed: int
    parameters: JSONDict = field(default_factory=dict)
    inputs: tuple[str, ...] = ()
    output: str | None = None
    version: str = "0.1.0"


def require_mass_at_least_one(total: float) -> None:
    if total < 1.0 - MASS_TOL:
        raise MassError(f"total mass {total!r} is below 1; the metronoid is empty")
