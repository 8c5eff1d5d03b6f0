"""Numerical tolerances shared by every module."""

FEASIBILITY_TOL = 1e-9
OPTIMALITY_TOL = 1e-9
PIVOT_TOL = 1e-11
BOUNDARY_TOL = 1e-7
MERGE_TOL = 1e-12
LEVEL_TOL = 1e-12
MASS_TOL = 1e-12
UNIT_TOL = 1e-12
SINGULAR_DET_TOL = 1e-12
MAX_BASIS_CONDITION = 1e12
