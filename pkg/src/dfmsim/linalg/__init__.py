"""Sparse systems, solvers, and automatic solver selection."""

from .dofs import DofMap
from .solvers import (
    DEFAULT_TOL,
    DIRECT_SIZE_LIMIT,
    SolverChoice,
    auto_select,
    solve,
    solve_direct,
    solve_iterative,
)
from .system import SparseSystem

__all__ = [
    "DEFAULT_TOL",
    "DIRECT_SIZE_LIMIT",
    "DofMap",
    "SolverChoice",
    "SparseSystem",
    "auto_select",
    "solve",
    "solve_direct",
    "solve_iterative",
]
