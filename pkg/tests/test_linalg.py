"""Sparse system, solver, and selection-policy tests."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dfmsim.errors import Breakdown, MaxIterations, SingularMatrix
from dfmsim.linalg import (
    DofMap,
    SolverChoice,
    SparseSystem,
    auto_select,
    solve,
    solve_direct,
    solve_iterative,
)


def dense_system(a, b):
    a = np.asarray(a, dtype=float)
    rows, cols = np.nonzero(a)
    return SparseSystem.from_triplets(a.shape[0], rows, cols, a[rows, cols], rhs=b)


def laplacian_1d(n, rhs):
    rows, cols, vals = [], [], []
    for i in range(n):
        rows.append(i), cols.append(i), vals.append(2.0)
        if i > 0:
            rows.append(i), cols.append(i - 1), vals.append(-1.0)
        if i < n - 1:
            rows.append(i), cols.append(i + 1), vals.append(-1.0)
    return SparseSystem.from_triplets(n, rows, cols, vals, rhs=rhs)


def convection_diffusion_1d(n, peclet=5.0):
    """Upwinded convection-diffusion: nonsymmetric, well conditioned."""
    rows, cols, vals = [], [], []
    for i in range(n):
        rows.append(i), cols.append(i), vals.append(2.0 + peclet)
        if i > 0:
            rows.append(i), cols.append(i - 1), vals.append(-1.0 - peclet)
        if i < n - 1:
            rows.append(i), cols.append(i + 1), vals.append(-1.0)
    rng = np.random.default_rng(11)
    return SparseSystem.from_triplets(n, rows, cols, vals, rhs=rng.standard_normal(n))


class TestSparseSystem:
    def test_from_triplets_merges_duplicates(self):
        s = SparseSystem.from_triplets(
            2, [0, 0, 1, 0], [0, 1, 1, 0], [1.0, 2.0, 3.0, 4.0], rhs=[0, 0]
        )
        assert s.nnz == 3
        assert np.allclose(s.toarray(), [[5.0, 2.0], [0.0, 3.0]])

    def test_columns_sorted_per_row(self):
        s = SparseSystem.from_triplets(3, [0, 0, 0], [2, 0, 1], [1, 2, 3], rhs=np.zeros(3))
        cols = s.indices[s.indptr[0] : s.indptr[1]]
        assert list(cols) == [0, 1, 2]

    def test_validation_rejects_bad_rhs(self):
        with pytest.raises(ValueError):
            SparseSystem(np.array([0, 1]), np.array([0]), np.array([1.0]), np.zeros(3))

    def test_matvec(self):
        s = dense_system([[2.0, 1.0], [0.0, 3.0]], [0, 0])
        assert s.matvec([1.0, 2.0]) == pytest.approx([4.0, 6.0])

    def test_symmetry_detection(self):
        assert dense_system([[2.0, 1.0], [1.0, 2.0]], [0, 0]).is_symmetric()
        assert not dense_system([[2.0, 1.0], [0.5, 2.0]], [0, 0]).is_symmetric()


class TestDofMap:
    def test_layout_and_inverse(self):
        dm = DofMap([("a", 3, 1), ("b", 2, 2)])
        assert dm.n_dofs == 7
        assert dm.dof("a", 2) == 2
        assert dm.dof("b", 0, 1) == 4
        assert dm.dof("b", 1, 0) == 5
        for row in range(dm.n_dofs):
            key, entry, comp = dm.locate(row)
            assert dm.dof(key, entry, comp) == row

    def test_block_slices(self):
        dm = DofMap([("a", 3, 1), ("b", 2, 2)])
        v = np.arange(7.0)
        assert dm.block_array("a", v) == pytest.approx([0.0, 1.0, 2.0])
        assert dm.block_array("b", v).shape == (2, 2)

    def test_duplicate_key_rejected(self):
        with pytest.raises(ValueError):
            DofMap([("a", 2, 1), ("a", 3, 1)])

    def test_out_of_range(self):
        dm = DofMap([("a", 2, 1)])
        with pytest.raises(IndexError):
            dm.dof("a", 2)
        with pytest.raises(IndexError):
            dm.locate(2)


class TestDirect:
    def test_identity(self):
        x = solve_direct(dense_system(np.eye(3), [3.0, 1.0, 4.0]))
        assert x == pytest.approx([3.0, 1.0, 4.0])

    def test_two_by_two(self):
        x = solve_direct(dense_system([[2.0, 1.0], [1.0, 2.0]], [3.0, 3.0]))
        assert x == pytest.approx([1.0, 1.0], abs=1e-13)

    def test_laplacian_residual(self):
        rng = np.random.default_rng(5)
        s = laplacian_1d(100, rng.standard_normal(100))
        x = solve_direct(s)
        assert s.residual(x) <= 1e-12, f"residual {s.residual(x):.2e}"

    def test_singular_rejected(self):
        with pytest.raises(SingularMatrix):
            solve_direct(dense_system([[1.0, 1.0], [1.0, 1.0]], [1.0, 2.0]))


class TestIterative:
    def test_cg_matches_direct_on_tpfa_like_system(self):
        # 2-cell TPFA stencil with one Dirichlet face: [[3,-1],[-1,1]]
        s = dense_system([[3.0, -1.0], [-1.0, 1.0]], [2.0, 0.0])
        xd = solve_direct(s)
        xi = solve_iterative(s, SolverChoice(kind="cg", tol=1e-12))
        assert np.abs(xd - xi).max() < 1e-10

    @pytest.mark.parametrize("pre", [None, "jacobi", "ilu0"])
    def test_cg_spd_all_preconditioners(self, pre):
        rng = np.random.default_rng(17)
        s = laplacian_1d(80, rng.standard_normal(80))
        choice = SolverChoice(kind="cg", preconditioner=pre, tol=1e-11)
        stats = {}
        x = solve_iterative(s, choice, stats=stats)
        assert s.residual(x) <= 1e-11
        xd = solve_direct(s)
        assert np.abs(x - xd).max() <= 10 * 1e-11 * max(np.abs(xd).max(), 1.0)
        assert stats["iterations"] >= 1

    def test_bicgstab_nonsymmetric_matches_direct(self):
        s = convection_diffusion_1d(120)
        assert not s.is_symmetric()
        x = solve_iterative(s, SolverChoice(kind="bicgstab", preconditioner="ilu0", tol=1e-11))
        xd = solve_direct(s)
        assert np.abs(x - xd).max() <= 1e-8, f"diff {np.abs(x - xd).max():.2e}"

    def test_zero_rhs_zero_iterations(self):
        s = laplacian_1d(10, np.zeros(10))
        stats = {}
        x = solve_iterative(s, SolverChoice(kind="cg"), stats=stats)
        assert not x.any()
        assert stats["iterations"] == 0

    def test_max_iterations_raised(self):
        rng = np.random.default_rng(3)
        s = laplacian_1d(200, rng.standard_normal(200))
        with pytest.raises(MaxIterations):
            solve_iterative(s, SolverChoice(kind="cg", tol=1e-12, max_iter=3))

    def test_cg_breakdown_on_indefinite(self):
        s = dense_system([[1.0, 0.0], [0.0, -1.0]], [1.0, 1.0])
        with pytest.raises(Breakdown):
            solve_iterative(s, SolverChoice(kind="cg", tol=1e-10))

    def test_ilu0_on_diagonal_matrix_converges_immediately(self):
        s = dense_system(np.diag([2.0, 5.0, 9.0]), [2.0, 5.0, 9.0])
        stats = {}
        solve_iterative(
            s, SolverChoice(kind="cg", preconditioner="ilu0", tol=1e-12), stats=stats
        )
        assert stats["iterations"] == 1

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=2, max_value=25), st.integers(min_value=0, max_value=2**31))
    def test_cg_ilu0_agrees_with_direct_on_random_spd(self, n, seed):
        rng = np.random.default_rng(seed)
        m = rng.standard_normal((n, n))
        a = m @ m.T + n * np.eye(n)
        s = dense_system(a, rng.standard_normal(n))
        x = solve_iterative(s, SolverChoice(kind="cg", preconditioner="ilu0", tol=1e-11))
        xd = solve_direct(s)
        scale = max(np.abs(xd).max(), 1.0)
        assert np.abs(x - xd).max() <= 10 * 1e-11 * scale * np.linalg.cond(a)


class TestAutoSelect:
    def test_small_system_direct(self):
        assert auto_select(100, "tpfa").kind == "direct"

    def test_large_symmetric_cg(self):
        c = auto_select(10**6, "tpfa")
        assert (c.kind, c.preconditioner) == ("cg", "ilu0")
        assert c.tol == 1e-10

    def test_large_nonsymmetric_bicgstab(self):
        for hint in ("mpfa", "upwind", "mpsa"):
            c = auto_select(10**6, hint)
            assert (c.kind, c.preconditioner) == ("bicgstab", "ilu0"), hint

    def test_threshold_boundary(self):
        assert auto_select(20000, "tpfa").kind == "direct"
        assert auto_select(20001, "tpfa").kind == "cg"

    def test_pure_in_row_count_and_hint(self):
        rng = np.random.default_rng(2)
        s1 = laplacian_1d(50, rng.standard_normal(50))
        s2 = convection_diffusion_1d(50)
        assert auto_select(s1, "tpfa") == auto_select(s2, "tpfa")

    def test_solve_wrapper_uses_selection(self):
        rng = np.random.default_rng(9)
        s = laplacian_1d(30, rng.standard_normal(30))
        x = solve(s, hint="tpfa")
        assert s.residual(x) <= 1e-10


class TestSolverChoice:
    def test_tol_positive(self):
        with pytest.raises(ValueError):
            SolverChoice(kind="cg", tol=0.0)

    def test_kind_validated(self):
        with pytest.raises(ValueError):
            SolverChoice(kind="gmres")
