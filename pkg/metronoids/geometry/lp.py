"""Bounded-variable primal simplex with Bland's anti-cycling rule.

Nonbasic variables sit at their lower or upper bound, so box constraints
never become tableau rows. Two phases: artificial variables first, then the
real objective. Final basic values are re-solved from the basis matrix.
"""

from __future__ import annotations

import numpy as np

from metronoids.errors import LpError, LpSingularBasisError
from metronoids.geometry.tolerances import (
    FEASIBILITY_TOL,
    MAX_BASIS_CONDITION,
    OPTIMALITY_TOL,
    PIVOT_TOL,
)
from metronoids.models.contracts import LpProblem, LpResult

_BASIC, _AT_LOWER, _AT_UPPER = 0, 1, 2


class _Tableau:
    def __init__(self, a: np.ndarray, b: np.ndarray, upper: np.ndarray) -> None:
        m, k = a.shape
        self.m = m
        self.n_struct = k
        self.a_std = np.hstack([a, np.eye(m)])
        self.b_std = b.copy()
        self.t = self.a_std.copy()
        self.upper = np.concatenate([upper, np.full(m, np.inf)])
        self.x = np.concatenate([np.zeros(k), b.copy()])
        self.status = np.concatenate([np.full(k, _AT_LOWER), np.full(m, _BASIC)])
        self.basis = list(range(k, k + m))
        self.rows = list(range(m))
        self.iterations = 0
        self.max_iterations = 50 * (m + k) + 1000

    def optimize(self, cost: np.ndarray, allowed: np.ndarray) -> str:
        while True:
            self.iterations += 1
            if self.iterations > self.max_iterations:
                raise LpError("simplex iteration limit reached")
            basis = np.array(self.basis, dtype=int)
            reduced = cost - cost[basis] @ self.t if basis.size else cost.copy()
            eligible = allowed & (
                ((self.status == _AT_LOWER) & (reduced > OPTIMALITY_TOL))
                | ((self.status == _AT_UPPER) & (reduced < -OPTIMALITY_TOL))
            )
            candidates = np.flatnonzero(eligible)
            if candidates.size == 0:
                return "optimal"
            j = int(candidates[0])
            direction = 1.0 if self.status[j] == _AT_LOWER else -1.0
            delta = -direction * self.t[:, j]

            flip_limit = self.upper[j]
            best = np.inf
            leave_row = -1
            if basis.size:
                xb = self.x[basis]
                ub = self.upper[basis]
                limits = np.full(basis.size, np.inf)
                dec = delta < -PIVOT_TOL
                limits[dec] = xb[dec] / -delta[dec]
                inc = (delta > PIVOT_TOL) & np.isfinite(ub)
                limits[inc] = (ub[inc] - xb[inc]) / delta[inc]
                limits = np.maximum(limits, 0.0)
                best = float(limits.min())
                if np.isfinite(best):
                    ties = np.flatnonzero(limits <= best + 1e-13 * max(1.0, best))
                    leave_row = int(ties[np.argmin(basis[ties])])

            if not np.isfinite(best) and not np.isfinite(flip_limit):
                return "unbounded"

            if flip_limit <= best:
                step = flip_limit
                if basis.size:
                    self.x[basis] += delta * step
                self.x[j] = self.upper[j] if direction > 0 else 0.0
                self.status[j] = _AT_UPPER if direction > 0 else _AT_LOWER
                continue

            step = best
            self.x[basis] += delta * step
            self.x[j] += direction * step
            leaving = int(basis[leave_row])
            if delta[leave_row] < 0:
                self.x[leaving] = 0.0
                self.status[leaving] = _AT_LOWER
            else:
                self.x[leaving] = self.upper[leaving]
                self.status[leaving] = _AT_UPPER
            self._pivot(leave_row, j)

    def _pivot(self, row: int, col: int) -> None:
        pivot = self.t[row, col]
        self.t[row] /= pivot
        factors = self.t[:, col].copy()
        factors[row] = 0.0
        self.t -= np.outer(factors, self.t[row])
        self.basis[row] = col
        self.status[col] = _BASIC

    def drive_out_artificials(self) -> None:
        k = self.n_struct
        row = 0
        while row < len(self.basis):
            var = self.basis[row]
            if var < k:
                row += 1
                continue
            candidates = np.flatnonzero((np.abs(self.t[row, :k]) > PIVOT_TOL) & (self.status[:k] != _BASIC))
            if candidates.size:
                leaving = var
                self._pivot(row, int(candidates[0]))
                self.x[leaving] = 0.0
                self.status[leaving] = _AT_LOWER
                row += 1
                continue
            # redundant constraint
            self.t = np.delete(self.t, row, axis=0)
            del self.basis[row]
            del self.rows[row]
            self.x[var] = 0.0
            self.status[var] = _AT_LOWER
        self.upper[k:] = 0.0

    def refine(self) -> None:
        if not self.basis:
            return
        basis = np.array(self.basis, dtype=int)
        rows = np.array(self.rows, dtype=int)
        b_mat = self.a_std[np.ix_(rows, basis)]
        condition = float(np.linalg.cond(b_mat))
        if not np.isfinite(condition) or condition > MAX_BASIS_CONDITION:
            raise LpSingularBasisError(condition)
        nonbasic = np.flatnonzero(self.status != _BASIC)
        rhs = self.b_std[rows] - self.a_std[np.ix_(rows, nonbasic)] @ self.x[nonbasic]
        self.x[basis] = np.linalg.solve(b_mat, rhs)


def lp_solve(problem: LpProblem) -> LpResult:
    c = np.asarray(problem.objective, dtype=float)
    sign = 1.0 if problem.sense == "max" else -1.0
    a = np.asarray(problem.a_eq, dtype=float)
    b = np.asarray(problem.b_eq, dtype=float).copy()
    lo = np.asarray(problem.lower, dtype=float)
    hi = np.asarray(problem.upper, dtype=float)
    k = c.size

    # x_j = shift_j + sum over its columns of coef * y_col, y >= 0
    cols: list[np.ndarray] = []
    col_cost: list[float] = []
    col_upper: list[float] = []
    col_owner: list[tuple[int, float]] = []
    shift = np.zeros(k)
    for j in range(k):
        if np.isfinite(lo[j]):
            shift[j] = lo[j]
            cols.append(a[:, j])
            col_cost.append(sign * c[j])
            col_upper.append(hi[j] - lo[j])
            col_owner.append((j, 1.0))
        elif np.isfinite(hi[j]):
            shift[j] = hi[j]
            cols.append(-a[:, j])
            col_cost.append(-sign * c[j])
            col_upper.append(np.inf)
            col_owner.append((j, -1.0))
        else:
            for coef in (1.0, -1.0):
                cols.append(coef * a[:, j])
                col_cost.append(coef * sign * c[j])
                col_upper.append(np.inf)
                col_owner.append((j, coef))

    m = a.shape[0]
    a_std = np.column_stack(cols) if cols else np.zeros((m, 0))
    b = b - a @ shift
    negative = b < 0
    a_std[negative] *= -1.0
    b[negative] *= -1.0

    tableau = _Tableau(a_std, b, np.array(col_upper, dtype=float))
    n_cols = a_std.shape[1]
    total = n_cols + m

    phase_one = np.concatenate([np.zeros(n_cols), -np.ones(m)])
    tableau.optimize(phase_one, np.ones(total, dtype=bool))
    infeasibility = float(tableau.x[n_cols:].sum())
    if infeasibility > FEASIBILITY_TOL * max(1.0, float(np.abs(b).max(initial=0.0))):
        return LpResult(status="infeasible", x=None, objective=None, iterations=tableau.iterations)

    tableau.drive_out_artificials()
    phase_two = np.concatenate([np.array(col_cost, dtype=float), np.zeros(m)])
    allowed = np.concatenate([np.ones(n_cols, dtype=bool), np.zeros(m, dtype=bool)])
    outcome = tableau.optimize(phase_two, allowed)
    if outcome == "unbounded":
        return LpResult(status="unbounded", x=None, objective=None, iterations=tableau.iterations)

    tableau.refine()
    y = tableau.x[:n_cols]
    y = np.clip(y, 0.0, tableau.upper[:n_cols])
    x = shift.copy()
    for idx, (owner, coef) in enumerate(col_owner):
        x[owner] += coef * y[idx]
    value = float(c @ x)
    return LpResult(status="optimal", x=x, objective=value, iterations=tableau.iterations)
