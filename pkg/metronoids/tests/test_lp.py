from __future__ import annotations

import numpy as np
import pytest
from scipy.optimize import linprog

from metronoids.geometry.lp import lp_solve
from metronoids.models.contracts import LpProblem


def _random_problem(rng: np.random.Generator) -> LpProblem:
    k = int(rng.integers(2, 9))
    rows = int(rng.integers(1, k))
    a = rng.standard_normal((rows, k))
    x0 = rng.uniform(0.2, 0.8, k)
    return LpProblem(rng.standard_normal(k), a, a @ x0, np.zeros(k), np.ones(k), sense="max")


def test_lp_matches_highs_on_random_boxed_problems() -> None:
    rng = np.random.default_rng(7)
    for _ in range(60):
        problem = _random_problem(rng)
        ours = lp_solve(problem)
        ref = linprog(
            -problem.objective,
            A_eq=problem.a_eq,
            b_eq=problem.b_eq,
            bounds=list(zip(problem.lower, problem.upper)),
            method="highs",
        )
        assert ours.status == "optimal"
        assert ours.objective == pytest.approx(-ref.fun, abs=1e-8)
        assert np.allclose(problem.a_eq @ ours.x, problem.b_eq, atol=1e-8)


def test_lp_reports_infeasible() -> None:
    problem = LpProblem([1.0, 1.0], [[1.0, 1.0]], [3.0], [0.0, 0.0], [1.0, 1.0])
    assert lp_solve(problem).status == "infeasible"


def test_lp_reports_unbounded() -> None:
    problem = LpProblem([1.0, 0.0], [[1.0, -1.0]], [0.0], [0.0, 0.0], [np.inf, np.inf])
    assert lp_solve(problem).status == "unbounded"


def test_lp_minimize_with_free_variable() -> None:
    problem = LpProblem([1.0, 2.0], [[1.0, 1.0]], [1.0], [-np.inf, 0.0], [np.inf, 5.0], sense="min")
    result = lp_solve(problem)
    assert result.status == "optimal"
    assert result.objective == pytest.approx(1.0)
    assert result.x == pytest.approx([1.0, 0.0])


def test_lp_hand_checked_examples() -> None:
    capped = lp_solve(LpProblem([1.0, 0.0], [[1.0, 1.0]], [1.0], [0.0, 0.0], [0.6, 0.6]))
    assert capped.objective == pytest.approx(0.6)
    assert capped.x == pytest.approx([0.6, 0.4])
    free = lp_solve(LpProblem([1.0, 0.0], [[1.0, 1.0]], [1.0], [0.0, 0.0], [1.0, 1.0]))
    assert free.x == pytest.approx([1.0, 0.0])
    assert lp_solve(LpProblem([1.0], [[1.0]], [2.0], [0.0], [1.0])).status == "infeasible"
