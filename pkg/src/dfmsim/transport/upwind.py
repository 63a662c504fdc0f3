"""Upwind advection stencils, in-grid and across interfaces.

Stencils carry the advected quantity q * T_upstream per face (no capacity
factor); assembly scales by the fluid heat capacity.
"""

from __future__ import annotations

import numpy as np

from ..flow.params import BC_DIRICHLET
from ..flow.tpfa import FluxStencil


def upwind_discretize(grid, flux, bc=None, skip_faces=()) -> FluxStencil:
    """Advection stencil: face value = q_f * T_up along the face normal.

    Inflow Dirichlet boundaries advect the boundary temperature; all other
    boundary faces use the interior cell.  Faces in skip_faces (interface
    faces handled by interface_advect) contribute nothing.
    """
    q = flux.of(grid) if hasattr(flux, "of") else np.asarray(flux, dtype=float)
    skip = set(int(f) for f in skip_faces)
    rows, cols, vals = [], [], []
    bound = np.zeros(grid.n_faces)
    for f in range(grid.n_faces):
        if f in skip or q[f] == 0.0:
            continue
        c0, c1 = grid.face_cells[f]
        if c1 >= 0:
            up = c0 if q[f] > 0 else c1
            rows.append(f)
            cols.append(up)
            vals.append(q[f])
        elif q[f] > 0 or bc is None or bc.kind[f] != BC_DIRICHLET:
            rows.append(f)
            cols.append(c0)
            vals.append(q[f])
        else:
            bound[f] = q[f] * bc.value[f]
    return FluxStencil(grid, rows, cols, vals, bound, np.zeros(grid.n_faces))


class InterfaceAdvection:
    """Per-pair upwinded exchange: energy leaves one side and enters the
    other with the same magnitude, so interface bookkeeping sums to zero."""

    def __init__(self, iface, interface_flux):
        self.iface = iface
        self.flux = np.asarray(interface_flux, dtype=float)
        if self.flux.shape != (iface.n_pairs,):
            raise ValueError(
                f"expected {iface.n_pairs} interface fluxes, got {self.flux.shape}"
            )

    def advected(self, t_higher_cells, t_lower_cells):
        """Energy per pair (positive toward the lower grid), per unit fluid
        capacity: q * T_upstream with upstream chosen by the flux sign."""
        up = np.where(self.flux > 0, t_higher_cells, t_lower_cells)
        return self.flux * up


def interface_advect(iface, interface_flux) -> InterfaceAdvection:
    return InterfaceAdvection(iface, interface_flux)
