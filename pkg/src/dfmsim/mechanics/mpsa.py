"""Multi-point stress approximation (O-variant) for 2D linear elasticity.

Mirrors the multi-point flux construction: every mesh vertex spawns an
interaction region with one 2x2 displacement gradient per incident cell.
Traction continuity (2 equations) and displacement continuity (2 equations,
at a point shifted from the face center toward the vertex) are enforced on
interior half-faces; boundary half-faces contribute one equation per
component, Dirichlet or Neumann, imposed at the face center so face-center
boundary data reproduces linear fields exactly.  Boundary values stay
symbolic so fracture walls can later be coupled as unknowns.

The interior continuity offset eta defaults to 1/3 on simplex grids, the
stable choice there, and to 0 otherwise.  Symmetric quad vertices make the
local system rank-deficient by one with a stress-free rotation nullspace;
the minimum-norm solution keeps tractions unique, and an explicit residual
check rejects genuinely inconsistent regions.
"""

from __future__ import annotations

import numpy as np

from ..errors import SingularLocalSystem
from ..flow.params import BC_DIRICHLET
from .params import ElasticParameters


def _traction_rows(mu, lam, n):
    """Rows mapping [g_xx, g_xy, g_yx, g_yy] to sigma(n) per unit area."""
    nx, ny = n
    return np.array(
        [
            [(2.0 * mu + lam) * nx, mu * ny, mu * ny, lam * nx],
            [lam * ny, mu * nx, mu * nx, (2.0 * mu + lam) * ny],
        ]
    )


class StressStencil:
    """Face tractions as a linear map of cell displacements and boundary
    values: T[f, i] = sum w * u[c, j] + sum w * u_bc[bf, j].

    Boundary values mean prescribed displacement on Dirichlet components and
    prescribed traction (per area) on Neumann/untouched ones; slit faces are
    Dirichlet-like with the wall displacement supplied by the caller.
    """

    def __init__(self, grid, cell_entries, bc_entries):
        self.grid = grid
        ce = np.asarray(cell_entries, dtype=float).reshape(-1, 5)
        be = np.asarray(bc_entries, dtype=float).reshape(-1, 5)
        self.cell_face = ce[:, 0].astype(np.int64)
        self.cell_comp = ce[:, 1].astype(np.int64)
        self.cell_col = ce[:, 2].astype(np.int64)
        self.cell_col_comp = ce[:, 3].astype(np.int64)
        self.cell_w = ce[:, 4].copy()
        self.bc_face = be[:, 0].astype(np.int64)
        self.bc_comp = be[:, 1].astype(np.int64)
        self.bc_col = be[:, 2].astype(np.int64)
        self.bc_col_comp = be[:, 3].astype(np.int64)
        self.bc_w = be[:, 4].copy()

    def face_tractions(self, u_cells, u_bc=None):
        """Integrated traction per face, outward from face_cells[f, 0]."""
        u_cells = np.asarray(u_cells, dtype=float).reshape(-1, 2)
        t = np.zeros((self.grid.n_faces, 2))
        np.add.at(
            t,
            (self.cell_face, self.cell_comp),
            self.cell_w * u_cells[self.cell_col, self.cell_col_comp],
        )
        if u_bc is not None:
            u_bc = np.asarray(u_bc, dtype=float).reshape(-1, 2)
            np.add.at(
                t,
                (self.bc_face, self.bc_comp),
                self.bc_w * u_bc[self.bc_col, self.bc_col_comp],
            )
        return t


def _default_eta(grid) -> float:
    faces_per_cell = np.diff(grid.cell_face_ptr)
    return 1.0 / 3.0 if (faces_per_cell == 3).all() else 0.0


def _solve_region(v, a_loc, rhs_mat, n_cell_cols):
    """Solve the local system; tolerate benign rank deficiencies.

    Two configurations leave a gradient mode undetermined: symmetric cell
    fans (a stress-free alternating rotation) and corners where two
    boundary faces both prescribe the shear traction.  The fallback pins
    the antisymmetric gradient part of every sub-cell with a weak penalty,
    which is exact for the rotation-free fields such corners can carry and
    below the patch-test tolerance otherwise.  The response to cell
    displacements (first n_cell_cols columns) must remain exact; anything
    else marks a genuinely defective region.
    """
    try:
        sol = np.linalg.solve(a_loc, rhs_mat)
        if np.isfinite(sol).all():
            resid = np.abs(a_loc @ sol - rhs_mat).max()
            if resid <= 1e-8 * max(1.0, np.abs(rhs_mat).max()):
                return sol
    except np.linalg.LinAlgError:
        pass
    m4 = a_loc.shape[1]
    w = 1e-6 * max(1.0, np.abs(a_loc).max())
    pen = np.zeros((m4 // 4, m4))
    for j in range(m4 // 4):
        pen[j, 4 * j + 1] = w
        pen[j, 4 * j + 2] = -w
    stacked = np.vstack([a_loc, pen])
    padded = np.vstack([rhs_mat, np.zeros((m4 // 4, rhs_mat.shape[1]))])
    sol, _, _, _ = np.linalg.lstsq(stacked, padded, rcond=None)
    # genuine defects (eta=0 fans, incompatible regions) sit at O(0.1);
    # the penalty itself injects noise well below this tolerance
    cell_block = rhs_mat[:, :n_cell_cols]
    resid = np.abs(a_loc @ sol[:, :n_cell_cols] - cell_block).max()
    if resid > 1e-6 * max(1.0, np.abs(cell_block).max()):
        raise SingularLocalSystem(
            f"vertex {v}: inconsistent local system, residual {resid:.2e}"
        )
    return sol


def mpsa_discretize(grid, params: ElasticParameters, eta=None) -> StressStencil:
    if grid.dim != 2:
        raise ValueError("elasticity is discretized on the 2D matrix grid only")
    if eta is None:
        eta = _default_eta(grid)
    mu, lam = params.mu, params.lam
    bc = params.bc

    node_cells = [[] for _ in range(grid.n_nodes)]
    for c in range(grid.n_cells):
        for v in grid.cell_nodes(c):
            node_cells[v].append(c)
    node_faces = [[] for _ in range(grid.n_nodes)]
    for f in range(grid.n_faces):
        for v in grid.face_nodes[f]:
            node_faces[v].append(f)

    cell_entries = []
    bc_entries = []

    for v in range(grid.n_nodes):
        cells = node_cells[v]
        faces = node_faces[v]
        if not cells:
            continue
        loc = {c: i for i, c in enumerate(cells)}
        m = len(cells)
        n_eq = sum(4 if grid.face_cells[f, 1] >= 0 else 2 for f in faces)
        if n_eq != 4 * m:
            raise SingularLocalSystem(
                f"vertex {v}: {n_eq} continuity equations for {4 * m} unknowns"
            )

        bcols = {}
        for f in faces:
            if grid.face_cells[f, 1] < 0:
                for r in (0, 1):
                    bcols[(f, r)] = len(bcols)
        nb = len(bcols)

        a_loc = np.zeros((4 * m, 4 * m))
        r_loc = np.zeros((4 * m, 2 * m))
        b_loc = np.zeros((4 * m, nb))
        x_v = grid.nodes[v]
        row = 0
        for f in faces:
            c0, c1 = grid.face_cells[f]
            area = grid.face_areas[f]
            unit_n = grid.face_normals[f] / area
            i0 = loc[c0]
            trow0 = _traction_rows(mu[c0], lam[c0], unit_n)
            if c1 >= 0:
                xcont = grid.face_centers[f] + eta * (x_v - grid.face_centers[f])
                d0 = xcont - grid.cell_centers[c0]
                i1 = loc[c1]
                trow1 = _traction_rows(mu[c1], lam[c1], unit_n)
                a_loc[row : row + 2, 4 * i0 : 4 * i0 + 4] = trow0
                a_loc[row : row + 2, 4 * i1 : 4 * i1 + 4] = -trow1
                row += 2
                d1 = xcont - grid.cell_centers[c1]
                for r in (0, 1):
                    a_loc[row, 4 * i0 + 2 * r : 4 * i0 + 2 * r + 2] = d0
                    a_loc[row, 4 * i1 + 2 * r : 4 * i1 + 2 * r + 2] = -d1
                    r_loc[row, 2 * i1 + r] += 1.0
                    r_loc[row, 2 * i0 + r] -= 1.0
                    row += 1
            else:
                d0 = grid.face_centers[f] - grid.cell_centers[c0]
                for r in (0, 1):
                    if bc.kind[f, r] == BC_DIRICHLET:
                        a_loc[row, 4 * i0 + 2 * r : 4 * i0 + 2 * r + 2] = d0
                        r_loc[row, 2 * i0 + r] -= 1.0
                        b_loc[row, bcols[(f, r)]] = 1.0
                    else:
                        # Neumann or untouched: traction component prescribed
                        a_loc[row, 4 * i0 : 4 * i0 + 4] = trow0[r]
                        b_loc[row, bcols[(f, r)]] = 1.0
                    row += 1

        sol = _solve_region(v, a_loc, np.hstack([r_loc, b_loc]), 2 * m)

        for f in faces:
            c0 = grid.face_cells[f, 0]
            area = grid.face_areas[f]
            unit_n = grid.face_normals[f] / area
            i0 = loc[c0]
            tmap = (0.5 * area) * (
                _traction_rows(mu[c0], lam[c0], unit_n) @ sol[4 * i0 : 4 * i0 + 4]
            )
            for r in (0, 1):
                for j, cell in enumerate(cells):
                    for s in (0, 1):
                        w = tmap[r, 2 * j + s]
                        if w != 0.0:
                            cell_entries.append((f, r, cell, s, w))
                for (bf, s), col in bcols.items():
                    w = tmap[r, 2 * m + col]
                    if w != 0.0:
                        bc_entries.append((f, r, bf, s, w))

    return StressStencil(grid, cell_entries, bc_entries)
