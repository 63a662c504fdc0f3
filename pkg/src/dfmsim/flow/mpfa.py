"""Multi-point flux approximation (O-variant) on a single 2D grid.

Each mesh vertex spawns an interaction region holding one local pressure
gradient per incident cell.  Flux and pressure continuity are enforced on the
half-faces meeting the vertex, with continuity points at face centers (the
symmetric choice).  The resulting stencil is patch-exact for any uniform SPD
permeability and reduces to two-point fluxes on K-orthogonal grids.
"""

from __future__ import annotations

import numpy as np

from ..errors import SingularLocalSystem
from .params import BC_DIRICHLET, BC_NEUMANN
from .tpfa import FluxStencil, _half_transmissibilities, tpfa_discretize


def mpfa_discretize(grid, params) -> FluxStencil:
    if grid.dim < 2:
        # One gradient unknown per cell: the O-method degenerates to TPFA.
        return tpfa_discretize(grid, params)

    k = params.permeability
    bc = params.bc
    n_faces = grid.n_faces

    node_cells = [[] for _ in range(grid.n_nodes)]
    for c in range(grid.n_cells):
        for v in grid.cell_nodes(c):
            node_cells[v].append(c)
    node_faces = [[] for _ in range(grid.n_nodes)]
    for f in range(n_faces):
        for v in grid.face_nodes[f]:
            node_faces[v].append(f)

    rows, cols, vals = [], [], []
    bound = np.zeros(n_faces)

    for v in range(grid.n_nodes):
        cells = node_cells[v]
        faces = node_faces[v]
        if not cells:
            continue
        loc = {c: i for i, c in enumerate(cells)}
        m = len(cells)
        n_eq = sum(2 if grid.face_cells[f, 1] >= 0 else 1 for f in faces)
        if n_eq != 2 * m:
            raise SingularLocalSystem(
                f"vertex {v}: {n_eq} continuity equations for {2 * m} gradient unknowns"
            )

        a_loc = np.zeros((2 * m, 2 * m))
        r_loc = np.zeros((2 * m, m))
        c_loc = np.zeros(2 * m)
        row = 0
        for f in faces:
            c0, c1 = grid.face_cells[f]
            area = grid.face_areas[f]
            unit_n = grid.face_normals[f] / area
            xbar = grid.face_centers[f]
            i0 = loc[c0]
            nk0 = unit_n @ k[c0]
            if c1 >= 0:
                i1 = loc[c1]
                nk1 = unit_n @ k[c1]
                a_loc[row, 2 * i0 : 2 * i0 + 2] = nk0
                a_loc[row, 2 * i1 : 2 * i1 + 2] = -nk1
                row += 1
                a_loc[row, 2 * i0 : 2 * i0 + 2] = xbar - grid.cell_centers[c0]
                a_loc[row, 2 * i1 : 2 * i1 + 2] = -(xbar - grid.cell_centers[c1])
                r_loc[row, i1] += 1.0
                r_loc[row, i0] -= 1.0
                row += 1
            elif bc.kind[f] == BC_DIRICHLET:
                a_loc[row, 2 * i0 : 2 * i0 + 2] = xbar - grid.cell_centers[c0]
                r_loc[row, i0] -= 1.0
                c_loc[row] = bc.value[f]
                row += 1
            else:
                # Neumann or untouched boundary: prescribed outward flux
                # density (zero by default, slit faces included).
                a_loc[row, 2 * i0 : 2 * i0 + 2] = -nk0
                if bc.kind[f] == BC_NEUMANN:
                    c_loc[row] = bc.value[f] / area
                row += 1

        try:
            sol = np.linalg.solve(a_loc, np.hstack([r_loc, c_loc[:, None]]))
        except np.linalg.LinAlgError as exc:
            raise SingularLocalSystem(f"vertex {v}: {exc}") from None
        g_p, g_c = sol[:, :m], sol[:, m]

        for f in faces:
            c0, c1 = grid.face_cells[f]
            if c1 < 0 and bc.kind[f] != BC_DIRICHLET:
                if bc.kind[f] == BC_NEUMANN:
                    bound[f] += 0.5 * bc.value[f]
                continue
            area = grid.face_areas[f]
            unit_n = grid.face_normals[f] / area
            msub = 0.5 * area
            i0 = loc[c0]
            coeff = -msub * (unit_n @ k[c0])
            trow = coeff @ g_p[2 * i0 : 2 * i0 + 2]
            for j, cell in enumerate(cells):
                t = trow[j]
                if t != 0.0:
                    rows.append(f)
                    cols.append(cell)
                    vals.append(t)
            bound[f] += coeff @ g_c[2 * i0 : 2 * i0 + 2]

    half = _half_transmissibilities(grid, params)[:, 0]
    return FluxStencil(grid, rows, cols, vals, bound, half)
