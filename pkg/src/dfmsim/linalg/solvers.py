"""Direct and preconditioned iterative solvers plus automatic selection.

Direct solves go through SuperLU (scipy); the iterative solvers (CG,
BiCGStab) and preconditioners (Jacobi, natural-order ILU0) are implemented
here on top of the CSR kernels so the hot paths stay numba-compatible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sps
import scipy.sparse.linalg as spla

from ..errors import Breakdown, MaxIterations, SingularMatrix
from .kernels import find_diagonal, ilu0_factor, ilu0_solve
from .system import SparseSystem

DIRECT_SIZE_LIMIT = 20000
DEFAULT_TOL = 1e-10

# hints naming a symmetric discretization; everything else is treated as
# nonsymmetric (MPFA, implicit upwind, MPSA)
SYMMETRIC_HINTS = {"tpfa", "conduction"}


@dataclass(frozen=True)
class SolverChoice:
    kind: str = "direct"            # direct | cg | bicgstab
    preconditioner: str | None = None   # None | jacobi | ilu0
    tol: float = DEFAULT_TOL
    max_iter: int = 0               # 0: pick 10n + 100 at solve time

    def __post_init__(self):
        if self.kind not in ("direct", "cg", "bicgstab"):
            raise ValueError(f"unknown solver kind {self.kind!r}")
        if self.preconditioner not in (None, "jacobi", "ilu0"):
            raise ValueError(f"unknown preconditioner {self.preconditioner!r}")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


def auto_select(sys_or_n, hint: str) -> SolverChoice:
    """Pure function of (row count, hint) per the selection policy."""
    n = sys_or_n if isinstance(sys_or_n, (int, np.integer)) else sys_or_n.n
    if n <= DIRECT_SIZE_LIMIT:
        return SolverChoice(kind="direct", tol=DEFAULT_TOL)
    if hint.lower() in SYMMETRIC_HINTS:
        return SolverChoice(kind="cg", preconditioner="ilu0", tol=DEFAULT_TOL)
    return SolverChoice(kind="bicgstab", preconditioner="ilu0", tol=DEFAULT_TOL)


def solve_direct(system: SparseSystem) -> np.ndarray:
    mat = sps.csr_matrix(
        (system.data, system.indices, system.indptr), shape=(system.n, system.n)
    ).tocsc()
    try:
        lu = spla.splu(mat)
        x = lu.solve(system.rhs)
    except RuntimeError as exc:
        raise SingularMatrix(f"direct factorization failed: {exc}") from exc
    if not np.isfinite(x).all():
        raise SingularMatrix("direct solve produced non-finite entries")
    # one step of iterative refinement pulls the residual to factorization
    # quality when the first solve is slightly off
    if system.residual(x) > 1e-12:
        x = x + lu.solve(system.rhs - system.matvec(x))
    return x


class _Preconditioner:
    def __init__(self, system: SparseSystem, kind):
        self.kind = kind
        if kind == "jacobi":
            d = system.diagonal()
            if (np.abs(d) < 1e-300).any():
                raise SingularMatrix("zero diagonal entry in Jacobi preconditioner")
            self.inv_diag = 1.0 / d
        elif kind == "ilu0":
            self.indptr = system.indptr
            self.indices = system.indices
            self.data = system.data.copy()
            self.diag = np.empty(system.n, dtype=np.int64)
            missing = find_diagonal(self.indptr, self.indices, self.diag)
            if missing >= 0:
                raise SingularMatrix(f"row {missing} has no diagonal entry")
            bad = ilu0_factor(self.indptr, self.indices, self.data, self.diag)
            if bad >= 0:
                raise SingularMatrix(f"ILU0 pivot vanished at row {bad}")

    def apply(self, r):
        if self.kind is None:
            return r.copy()
        if self.kind == "jacobi":
            return self.inv_diag * r
        y = np.empty_like(r)
        ilu0_solve(self.indptr, self.indices, self.data, self.diag, r, y)
        return y


def solve_iterative(system: SparseSystem, choice: SolverChoice, stats=None) -> np.ndarray:
    """Preconditioned CG or BiCGStab to relative residual <= choice.tol."""
    b = system.rhs
    nb = np.linalg.norm(b)
    if stats is None:
        stats = {}
    if nb == 0.0:
        stats.update(iterations=0, residual=0.0)
        return np.zeros(system.n)
    max_iter = choice.max_iter if choice.max_iter > 0 else 10 * system.n + 100
    pre = _Preconditioner(system, choice.preconditioner)
    if choice.kind == "cg":
        x, it = _cg(system, pre, b, nb, choice.tol, max_iter)
    elif choice.kind == "bicgstab":
        x, it = _bicgstab(system, pre, b, nb, choice.tol, max_iter)
    else:
        raise ValueError(f"solve_iterative got kind {choice.kind!r}")
    res = system.residual(x)
    if res > choice.tol:
        raise MaxIterations(
            f"{choice.kind} true residual {res:.3e} above tol {choice.tol:.1e} "
            f"after {it} iterations"
        )
    stats.update(iterations=it, residual=res)
    return x


def _cg(system, pre, b, nb, tol, max_iter):
    x = np.zeros(system.n)
    r = b.copy()
    z = pre.apply(r)
    p = z.copy()
    rz = float(r @ z)
    for it in range(1, max_iter + 1):
        ap = system.matvec(p)
        pap = float(p @ ap)
        if pap <= 0.0:
            raise Breakdown(f"CG curvature {pap:.3e} not positive (matrix not SPD?)")
        alpha = rz / pap
        x += alpha * p
        r -= alpha * ap
        if np.linalg.norm(r) <= tol * nb:
            return x, it
        z = pre.apply(r)
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise MaxIterations(f"CG did not converge in {max_iter} iterations")


def _bicgstab(system, pre, b, nb, tol, max_iter):
    x = np.zeros(system.n)
    r = b.copy()
    r0 = r.copy()
    rho = alpha = omega = 1.0
    v = np.zeros_like(r)
    p = np.zeros_like(r)
    for it in range(1, max_iter + 1):
        rho_new = float(r0 @ r)
        if abs(rho_new) < 1e-300 * nb * nb:
            raise Breakdown("BiCGStab rho vanished")
        beta = (rho_new / rho) * (alpha / omega)
        p = r + beta * (p - omega * v)
        ph = pre.apply(p)
        v = system.matvec(ph)
        r0v = float(r0 @ v)
        if abs(r0v) < 1e-300:
            raise Breakdown("BiCGStab r0.v vanished")
        alpha = rho_new / r0v
        s = r - alpha * v
        if np.linalg.norm(s) <= tol * nb:
            x += alpha * ph
            return x, it
        sh = pre.apply(s)
        t = system.matvec(sh)
        tt = float(t @ t)
        if tt < 1e-300:
            raise Breakdown("BiCGStab t.t vanished")
        omega = float(t @ s) / tt
        x += alpha * ph + omega * sh
        r = s - omega * t
        if np.linalg.norm(r) <= tol * nb:
            return x, it
        rho = rho_new
    raise MaxIterations(f"BiCGStab did not converge in {max_iter} iterations")


def solve(system: SparseSystem, choice: SolverChoice | None = None, hint="tpfa",
          stats=None) -> np.ndarray:
    """Solve with an explicit choice or the auto-selected one."""
    if choice is None:
        choice = auto_select(system, hint)
    if choice.kind == "direct":
        x = solve_direct(system)
        if stats is not None:
            stats.update(iterations=0, residual=system.residual(x))
        return x
    return solve_iterative(system, choice, stats=stats)
