"""Elasticity on the slit matrix grid with fracture-wall displacement dofs.

The slit faces of every 1D fracture cell carry their own displacement
unknowns (one 2-vector per wall).  The global system couples cell momentum
balance with, per fracture cell, traction balance across the slit and a
prescribed displacement jump u_plus - u_minus = slip * tangent +
aperture_change * normal.  Zero jump makes the slit mechanically invisible,
so uniform-stress states are reproduced exactly on fractured meshes.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ..errors import GeometryError, SingularMatrix, SingularSystem
from ..flow.params import BC_DIRICHLET
from ..linalg.solvers import solve
from ..linalg.system import SparseSystem
from .fields import DisplacementField, FractureTractions
from .mpsa import mpsa_discretize


class WallCell(NamedTuple):
    """One fracture cell and its two matrix wall faces."""

    grid: object
    cell: int
    face_plus: int
    face_minus: int
    tangent: np.ndarray
    normal: np.ndarray


def matrix_grid(mdg):
    two_d = mdg.subdomains(2)
    if len(two_d) != 1:
        raise ValueError("elasticity needs exactly one 2D matrix grid")
    return two_d[0]


def wall_layout(mdg, g2) -> list[WallCell]:
    """Per fracture cell: paired wall faces plus its tangent/normal frame.

    The tangent points from the lower- toward the higher-parameter node of
    the 1D cell; the normal is the left-hand rotation of the tangent, and
    the plus wall is the one whose matrix cell lies on the normal side.
    """
    layout = []
    for ifc in mdg.interfaces:
        if ifc.higher is not g2:
            continue
        g1 = ifc.lower
        by_cell: dict[int, dict[int, int]] = {}
        for (f, c), side in zip(ifc.pairs, ifc.sides):
            by_cell.setdefault(int(c), {})[int(side)] = int(f)
        for c in range(g1.n_cells):
            faces = by_cell.get(c, {})
            if set(faces) != {1, -1}:
                raise GeometryError(
                    f"fracture cell {c} does not have one wall face per side"
                )
            ids = g1.cell_nodes(c)
            dx = g1.nodes[ids[-1]] - g1.nodes[ids[0]]
            that = dx / np.linalg.norm(dx)
            nhat = np.array([-that[1], that[0]])
            layout.append(WallCell(g1, c, faces[1], faces[-1], that, nhat))
    return layout


def _wall_faces(layout) -> np.ndarray:
    return np.array(
        [f for wc in layout for f in (wc.face_plus, wc.face_minus)],
        dtype=np.int64,
    )


def prepare_stencil(mdg, params):
    """Mark fracture walls as displacement boundaries and discretize.

    Overwrites the boundary-condition kind on wall faces; their values are
    never read from params (they are unknowns of the coupled system).  The
    stencil stays valid while the moduli and boundary kinds are unchanged,
    so the stimulation loop discretizes once.
    """
    g2 = matrix_grid(mdg)
    wf = _wall_faces(wall_layout(mdg, g2))
    if len(wf):
        params.bc.kind[wf] = BC_DIRICHLET
    return mpsa_discretize(g2, params)


def _entry_lookup(faces):
    order = np.argsort(faces, kind="stable")
    sorted_faces = faces[order]

    def of(f):
        lo = np.searchsorted(sorted_faces, f)
        hi = np.searchsorted(sorted_faces, f + 1)
        return order[lo:hi]

    return of


def solve_elasticity(mdg, params, slip=None, stencil=None) -> DisplacementField:
    """Quasi-static equilibrium with prescribed fracture jumps.

    slip=None means zero jump everywhere (intact-rock response).  Pass a
    precomputed stencil from prepare_stencil to skip rediscretization.
    """
    g2 = matrix_grid(mdg)
    layout = wall_layout(mdg, g2)
    wall_faces = _wall_faces(layout)

    exterior_dirichlet = params.bc.kind == BC_DIRICHLET
    if len(wall_faces):
        exterior_dirichlet[wall_faces] = False
    if not exterior_dirichlet.any():
        raise SingularSystem(
            "no Dirichlet component on the outer boundary: rigid-body "
            "modes are unconstrained"
        )
    if stencil is None:
        stencil = prepare_stencil(mdg, params)

    n = g2.n_cells
    nw = len(wall_faces)
    n_dofs = 2 * n + 2 * nw
    widx_of = np.full(g2.n_faces, -1, dtype=np.int64)
    widx_of[wall_faces] = np.arange(nw)

    fc = g2.face_cells
    bcval = params.bc.value
    rows_l, cols_l, vals_l = [], [], []
    rhs = np.zeros(n_dofs)

    cells = np.arange(n)
    rhs[2 * cells] = g2.cell_volumes * params.body_force[:, 0]
    rhs[2 * cells + 1] = g2.cell_volumes * params.body_force[:, 1]

    # momentum: -sum of outward tractions = body load
    cf, cr = stencil.cell_face, stencil.cell_comp
    cc, cs, cw = stencil.cell_col, stencil.cell_col_comp, stencil.cell_w
    bfe, bre = stencil.bc_face, stencil.bc_comp
    bbe, bse, bwe = stencil.bc_col, stencil.bc_col_comp, stencil.bc_w
    wall_entry = widx_of[bbe] >= 0
    for side, sgn in ((0, 1.0), (1, -1.0)):
        own = fc[cf, side]
        keep = own >= 0
        rows_l.append(2 * own[keep] + cr[keep])
        cols_l.append(2 * cc[keep] + cs[keep])
        vals_l.append(-sgn * cw[keep])

        own = fc[bfe, side]
        keep = own >= 0
        kw = keep & wall_entry
        rows_l.append(2 * own[kw] + bre[kw])
        cols_l.append(2 * n + 2 * widx_of[bbe[kw]] + bse[kw])
        vals_l.append(-sgn * bwe[kw])
        kn = keep & ~wall_entry
        np.add.at(
            rhs, 2 * own[kn] + bre[kn], sgn * bwe[kn] * bcval[bbe[kn], bse[kn]]
        )

    centries = _entry_lookup(cf)
    bentries = _entry_lookup(bfe)
    for k, wc in enumerate(layout):
        base = 2 * n + 4 * k
        s_k = 0.0 if slip is None else slip.slip_of(wc.grid)[wc.cell]
        da_k = 0.0 if slip is None else slip.aperture_change_of(wc.grid)[wc.cell]
        jump = s_k * wc.tangent + da_k * wc.normal
        # traction balance across the slit: T_plus + T_minus = 0
        for face in (wc.face_plus, wc.face_minus):
            idx = centries(face)
            rows_l.append(base + cr[idx])
            cols_l.append(2 * cc[idx] + cs[idx])
            vals_l.append(cw[idx])
            idx = bentries(face)
            iw = idx[widx_of[bbe[idx]] >= 0]
            inm = idx[widx_of[bbe[idx]] < 0]
            rows_l.append(base + bre[iw])
            cols_l.append(2 * n + 2 * widx_of[bbe[iw]] + bse[iw])
            vals_l.append(bwe[iw])
            np.add.at(
                rhs, base + bre[inm], -bwe[inm] * bcval[bbe[inm], bse[inm]]
            )
        # prescribed jump u_plus - u_minus
        jp = 2 * n + 2 * widx_of[wc.face_plus]
        jm = 2 * n + 2 * widx_of[wc.face_minus]
        rows_l.append(np.array([base + 2, base + 2, base + 3, base + 3]))
        cols_l.append(np.array([jp, jm, jp + 1, jm + 1]))
        vals_l.append(np.array([1.0, -1.0, 1.0, -1.0]))
        rhs[base + 2] = jump[0]
        rhs[base + 3] = jump[1]

    # explicit diagonal so factorizations see every pivot slot
    rows_l.append(np.arange(n_dofs))
    cols_l.append(np.arange(n_dofs))
    vals_l.append(np.zeros(n_dofs))

    system = SparseSystem.from_triplets(
        n_dofs,
        np.concatenate(rows_l),
        np.concatenate(cols_l),
        np.concatenate(vals_l),
        rhs=rhs,
    )
    try:
        x = solve(system, hint="mpsa")
    except SingularMatrix as exc:
        raise SingularSystem(str(exc)) from None
    return DisplacementField(
        g2, x[: 2 * n].reshape(n, 2), wall_faces, x[2 * n :].reshape(nw, 2)
    )


def fracture_tractions(mdg, params, disp, stencil=None) -> FractureTractions:
    """Tangential/normal tractions per fracture cell from the wall stress.

    Components are taken on the minus-side wall in the cell frame of
    wall_layout; normal traction is compression-positive.
    """
    g2 = matrix_grid(mdg)
    layout = wall_layout(mdg, g2)
    if stencil is None:
        stencil = prepare_stencil(mdg, params)
    u_bc = params.bc.value.copy()
    if len(disp.wall_faces):
        u_bc[disp.wall_faces] = disp.wall_values
    tr = stencil.face_tractions(disp.cells, u_bc)
    out = FractureTractions(mdg)
    for wc in layout:
        t_minus = tr[wc.face_minus] / g2.face_areas[wc.face_minus]
        out.tau_of(wc.grid)[wc.cell] = wc.tangent @ t_minus
        out.normal_of(wc.grid)[wc.cell] = -(wc.normal @ t_minus)
    return out
